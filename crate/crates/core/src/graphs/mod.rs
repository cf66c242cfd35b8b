//! Labeled weighted graphs and the per-label adjacency blocks built from them.
//!
//! Edges are undirected, carry a string label and a real weight, and may be
//! self-loops. Two edges may join the same pair of vertices only if their
//! labels differ.

mod builders;
mod json;

pub use builders::{bench8, build, pst_tree, random_regular, GraphFamily};
pub use json::{load_json, save_json};

use std::collections::VecDeque;

use thiserror::Error;

use crate::linalg::{ComplexMatrix, C64};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("duplicate edge ({u}, {v}) with label {label:?}")]
    DuplicateEdge { u: usize, v: usize, label: String },
    #[error("invalid parameters for {family}: {reason}")]
    InvalidParams { family: String, reason: String },
    #[error("vertices {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
    #[error("vertices {0} and {1} are joined by several labeled edges")]
    AmbiguousEdge(usize, usize),
    #[error("graph is not regular; degrees {0:?}")]
    NotRegular(Vec<usize>),
    #[error("malformed graph document: {0}")]
    Malformed(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub label: String,
    pub weight: f64,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    pub fn touches(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }

    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    fn same_pair(&self, u: usize, v: usize) -> bool {
        (self.u == u && self.v == v) || (self.u == v && self.v == u)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledGraph {
    n: usize,
    labels: Vec<String>,
    edges: Vec<Edge>,
    origin: Option<usize>,
}

impl LabeledGraph {
    pub fn new<S: Into<String>>(n: usize, labels: impl IntoIterator<Item = S>) -> Result<Self, GraphError> {
        let mut g = Self { n, labels: Vec::new(), edges: Vec::new(), origin: None };
        for l in labels {
            g.add_label(l)?;
        }
        Ok(g)
    }

    pub fn add_label(&mut self, label: impl Into<String>) -> Result<(), GraphError> {
        let label = label.into();
        if self.labels.contains(&label) {
            return Err(GraphError::DuplicateLabel(label));
        }
        self.labels.push(label);
        Ok(())
    }

    pub fn add_edge(&mut self, u: usize, v: usize, label: &str, weight: f64) -> Result<(), GraphError> {
        for x in [u, v] {
            if x >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        if !self.labels.iter().any(|l| l == label) {
            return Err(GraphError::UnknownLabel(label.to_string()));
        }
        if self.edges.iter().any(|e| e.label == label && e.same_pair(u, v)) {
            return Err(GraphError::DuplicateEdge { u, v, label: label.to_string() });
        }
        self.edges.push(Edge { u, v, label: label.to_string(), weight });
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Vertex id that sits at coordinate 0 (set by the line builders).
    pub fn origin(&self) -> Option<usize> {
        self.origin
    }

    pub fn with_origin(mut self, origin: usize) -> Result<Self, GraphError> {
        if origin >= self.n {
            return Err(GraphError::VertexOutOfRange { vertex: origin, n: self.n });
        }
        self.origin = Some(origin);
        Ok(self)
    }

    /// Plot coordinate of every vertex: `id - origin` for lines, `id` otherwise.
    pub fn coordinates(&self) -> Vec<f64> {
        let o = self.origin.unwrap_or(0) as f64;
        (0..self.n).map(|v| v as f64 - o).collect()
    }

    /// Vertex at the given coordinate, if any.
    pub fn vertex_at(&self, coord: i64) -> Option<usize> {
        let id = coord + self.origin.unwrap_or(0) as i64;
        (0..self.n as i64).contains(&id).then_some(id as usize)
    }

    /// Weighted adjacency of the edges carrying `label`; self-loop weight
    /// lands once on the diagonal.
    pub fn subgraph_adjacency(&self, label: &str) -> Result<SubgraphAdjacency, GraphError> {
        if self.label_index(label).is_none() {
            return Err(GraphError::UnknownLabel(label.to_string()));
        }
        let mut m = ComplexMatrix::zeros(self.n, self.n);
        for e in self.edges.iter().filter(|e| e.label == label) {
            accumulate(&mut m, e);
        }
        Ok(SubgraphAdjacency { label: label.to_string(), matrix: m })
    }

    /// Weighted adjacency over all labels.
    pub fn adjacency(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.n, self.n);
        for e in &self.edges {
            accumulate(&mut m, e);
        }
        m
    }

    /// Proper edge coloring check: no vertex has two incident non-loop edges
    /// sharing a label.
    pub fn validate_proper_coloring(&self) -> ColoringReport {
        let mut violations = Vec::new();
        for x in 0..self.n {
            let incident: Vec<usize> =
                (0..self.edges.len()).filter(|&i| !self.edges[i].is_loop() && self.edges[i].touches(x)).collect();
            for (a, &i) in incident.iter().enumerate() {
                for &j in &incident[a + 1..] {
                    if self.edges[i].label == self.edges[j].label {
                        violations.push(ColoringViolation {
                            vertex: x,
                            label: self.edges[i].label.clone(),
                            edges: (i, j),
                        });
                    }
                }
            }
        }
        ColoringReport { proper: violations.is_empty(), violations }
    }

    /// Label-agnostic degree of every vertex, self-loops excluded.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for e in self.edges.iter().filter(|e| !e.is_loop()) {
            d[e.u] += 1;
            d[e.v] += 1;
        }
        d
    }

    /// Returns the common degree, or [`GraphError::NotRegular`] with every
    /// vertex degree.
    pub fn validate_regular(&self) -> Result<usize, GraphError> {
        let d = self.degrees();
        match d.first() {
            Some(&first) if d.iter().all(|&x| x == first) => Ok(first),
            None => Ok(0),
            _ => Err(GraphError::NotRegular(d)),
        }
    }

    /// Labels of the edges along `path`, in order.
    pub fn path_colors(&self, path: &[usize]) -> Result<Vec<String>, GraphError> {
        for &x in path {
            if x >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        path.windows(2)
            .map(|w| {
                let mut found = self.edges.iter().filter(|e| !e.is_loop() && e.same_pair(w[0], w[1]));
                match (found.next(), found.next()) {
                    (Some(e), None) => Ok(e.label.clone()),
                    (Some(_), Some(_)) => Err(GraphError::AmbiguousEdge(w[0], w[1])),
                    _ => Err(GraphError::NotAdjacent(w[0], w[1])),
                }
            })
            .collect()
    }

    pub fn neighbors(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |e| !e.is_loop() && e.touches(x)).map(move |e| e.other(x))
    }

    /// Breadth-first shortest path from `a` to `b`, ties broken by edge order.
    pub fn shortest_path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        if a >= self.n || b >= self.n {
            return None;
        }
        let mut prev = vec![usize::MAX; self.n];
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([a]);
        seen[a] = true;
        while let Some(x) = queue.pop_front() {
            if x == b {
                let mut path = vec![b];
                let mut cur = b;
                while cur != a {
                    cur = prev[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for y in self.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        None
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || (0..self.n).all(|v| self.shortest_path(0, v).is_some())
    }
}

fn accumulate(m: &mut ComplexMatrix, e: &Edge) {
    let w = C64::new(e.weight, 0.0);
    m[(e.u, e.v)] += w;
    if !e.is_loop() {
        m[(e.v, e.u)] += w;
    }
}

/// Real symmetric adjacency of one label class.
#[derive(Clone, Debug, PartialEq)]
pub struct SubgraphAdjacency {
    pub label: String,
    pub matrix: ComplexMatrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ColoringViolation {
    pub vertex: usize,
    pub label: String,
    /// Indices into [`LabeledGraph::edges`].
    pub edges: (usize, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ColoringReport {
    pub proper: bool,
    pub violations: Vec<ColoringViolation>,
}
