//! Graph documents: `{"n": 2, "labels": ["0","1"], "edges": [[0,1,"0",1.0], ...]}`.
//! The weight may be omitted (defaults to 1.0). Line graphs also carry an
//! optional `"origin"` vertex.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{GraphError, LabeledGraph};

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    n: usize,
    labels: Vec<String>,
    edges: Vec<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    origin: Option<usize>,
}

fn malformed(msg: impl Into<String>) -> GraphError {
    GraphError::Malformed(msg.into())
}

fn parse_doc(doc: GraphDoc) -> Result<LabeledGraph, GraphError> {
    let mut g = LabeledGraph::new(doc.n, doc.labels)?;
    for (k, e) in doc.edges.iter().enumerate() {
        if !(3..=4).contains(&e.len()) {
            return Err(malformed(format!("edge {k}: expected [u, v, label, weight?]")));
        }
        let vertex =
            |x: &Value| x.as_u64().map(|x| x as usize).ok_or_else(|| malformed(format!("edge {k}: bad vertex id {x}")));
        let (u, v) = (vertex(&e[0])?, vertex(&e[1])?);
        let label = e[2].as_str().ok_or_else(|| malformed(format!("edge {k}: label must be a string")))?;
        let weight = match e.get(3) {
            Some(w) => w.as_f64().ok_or_else(|| malformed(format!("edge {k}: weight must be a number")))?,
            None => 1.0,
        };
        g.add_edge(u, v, label, weight)?;
    }
    match doc.origin {
        Some(o) => g.with_origin(o),
        None => Ok(g),
    }
}

pub fn load_json(text: &str) -> Result<LabeledGraph, GraphError> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
    parse_doc(doc)
}

pub fn save_json(g: &LabeledGraph) -> String {
    let doc = GraphDoc {
        n: g.n(),
        labels: g.labels().to_vec(),
        edges: g
            .edges()
            .iter()
            .map(|e| vec![e.u.into(), e.v.into(), e.label.clone().into(), e.weight.into()])
            .collect(),
        origin: g.origin(),
    };
    serde_json::to_string(&doc).expect("graph documents always serialize")
}
