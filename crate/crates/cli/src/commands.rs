use std::f64::consts::PI;
use std::fmt;

use anyhow::{bail, ensure, Result};
use hqw::exec::try_par_map;
use hqw::graphs::LabeledGraph;
use hqw::linalg::{hermitian_eig, Eigen, StateVector, C64};
use hqw::matmul::{
    product_entry, product_matrix, product_trace, triangle_count, triangles_at_vertex, Mode, ProductEstimate,
    RegularGraphSequence,
};
use hqw::pst::{run_pst, segment_line_transfer, PstPlan};
use hqw::walk::{position_distribution, std_dev, CoinInit, HybridWalk, InitialState};
use serde_json::{json, Map, Value};

use crate::config::{
    Command, DynamicsConfig, Format, MatmulConfig, MatmulTarget, Model, PstConfig, SweepConfig, SweepKind,
    TrianglesConfig,
};
use crate::output::{num12, Artifact, Table};

/// PST runs below this fidelity fail.
const PST_FIDELITY_FLOOR: f64 = 1.0 - 1e-6;
/// Allowed drift of a distribution's total from 1.
const MASS_TOLERANCE: f64 = 1e-9;

/// A numerical invariant failed; the artifact is still written.
#[derive(Debug)]
pub struct NumericalViolation(pub String);

impl fmt::Display for NumericalViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "numerical check failed: {}", self.0)
    }
}

impl std::error::Error for NumericalViolation {}

/// The artifact plus an optional violation to report after writing it.
pub struct Outcome {
    pub artifact: Artifact,
    pub summary: String,
    pub violation: Option<NumericalViolation>,
}

impl Outcome {
    fn ok(artifact: Artifact, summary: String) -> Self {
        Self { artifact, summary, violation: None }
    }
}

pub fn run(command: &Command, format: Format) -> Result<Outcome> {
    match command {
        Command::Dynamics(c) => dynamics(c),
        Command::Sweep(c) => sweep(c),
        Command::Pst(c) => pst(c),
        Command::Matmul(c) => matmul(c, format),
        Command::Triangles(c) => triangles(c),
    }
}

/// Evolution on one graph under either model.
enum Evolution {
    Hybrid(HybridWalk),
    Continuous { graph: LabeledGraph, eigen: Eigen },
}

struct Observation {
    distribution: Vec<f64>,
    sigma: f64,
    entropy: f64,
}

impl Evolution {
    fn new(graph: LabeledGraph, cfg: &DynamicsConfig) -> Result<Self> {
        Ok(match cfg.model {
            Model::Hybrid => {
                let coin = cfg.coin.spec(graph.labels().len());
                Self::Hybrid(HybridWalk::new(graph, coin)?)
            }
            Model::Continuous => {
                let eigen = hermitian_eig(&graph.adjacency())?;
                Self::Continuous { graph, eigen }
            }
        })
    }

    fn graph(&self) -> &LabeledGraph {
        match self {
            Self::Hybrid(w) => w.graph(),
            Self::Continuous { graph, .. } => graph,
        }
    }

    /// Observables after `0..=steps` steps of duration `t`.
    fn observe(&self, t: f64, steps: usize, init: &InitialState) -> Result<Vec<Observation>> {
        let coords = self.graph().coordinates();
        match self {
            Self::Hybrid(w) => {
                let traj = w.run(t, steps, &init.build(w.graph())?)?;
                Ok((0..traj.len())
                    .map(|k| Observation {
                        distribution: traj.distributions[k].clone(),
                        sigma: traj.sigmas[k],
                        entropy: traj.entropies[k],
                    })
                    .collect())
            }
            Self::Continuous { graph, eigen } => {
                let v = graph
                    .vertex_at(init.position)
                    .ok_or_else(|| anyhow::anyhow!("no vertex at coordinate {}", init.position))?;
                let psi0 = StateVector::basis(graph.n(), v);
                (0..=steps)
                    .map(|k| {
                        let psi = eigen.evolve(k as f64 * t, psi0.amplitudes())?;
                        let distribution: Vec<f64> = psi.iter().map(|a| a.norm_sqr()).collect();
                        let sigma = std_dev(&distribution, &coords)?;
                        Ok(Observation { distribution, sigma, entropy: 0.0 })
                    })
                    .collect()
            }
        }
    }
}

fn coordinate_columns(graph: &LabeledGraph) -> Vec<String> {
    graph.coordinates().iter().map(|&x| format!("p_{}", crate::output::fmt12(x))).collect()
}

fn check_mass(table: &Table, first_p: usize, n: usize) -> Option<NumericalViolation> {
    table.rows.iter().enumerate().find_map(|(r, row)| {
        let total: f64 = row[first_p..first_p + n].iter().sum();
        ((total - 1.0).abs() > MASS_TOLERANCE)
            .then(|| NumericalViolation(format!("row {r} has total probability {total}")))
    })
}

fn dynamics(cfg: &DynamicsConfig) -> Result<Outcome> {
    let w_grid = cfg.grids.iter().find(|g| g.name == "w");
    let ws: Vec<Option<f64>> = match w_grid {
        Some(g) => g.values().into_iter().map(Some).collect(),
        None => vec![None],
    };
    let models = try_par_map(&ws, |&w| Evolution::new(cfg.graph.resolve(w)?, cfg))?;
    let n = models[0].graph().n();
    ensure!(models.iter().all(|m| m.graph().n() == n), "every w must give the same vertex count");

    let mut columns = vec!["step".to_string(), "t".to_string()];
    if w_grid.is_some() {
        columns.push("w".into());
    }
    columns.extend(coordinate_columns(models[0].graph()));
    columns.push("sigma".into());
    columns.push("entropy".into());

    let row = |step: usize, t: f64, w: Option<f64>, o: &Observation| {
        let mut r = vec![step as f64, t];
        r.extend(w);
        r.extend(&o.distribution);
        r.push(o.sigma);
        r.push(o.entropy);
        r
    };

    let rows = if cfg.grids.is_empty() {
        let obs = models[0].observe(cfg.t, cfg.steps, &cfg.init)?;
        obs.iter().enumerate().map(|(k, o)| row(k, cfg.t, None, o)).collect()
    } else {
        let ts: Vec<f64> = match cfg.grids.iter().find(|g| g.name == "t") {
            Some(g) => g.values(),
            None => vec![cfg.t],
        };
        // Rows follow the order in which the grids were given.
        let t_outer = cfg.grids[0].name == "t";
        let mut points = Vec::with_capacity(ts.len() * ws.len());
        if t_outer {
            for &t in &ts {
                points.extend((0..ws.len()).map(|wi| (t, wi)));
            }
        } else {
            for wi in 0..ws.len() {
                points.extend(ts.iter().map(|&t| (t, wi)));
            }
        }
        try_par_map(&points, |&(t, wi)| -> Result<Vec<f64>> {
            let obs = models[wi].observe(t, cfg.steps, &cfg.init)?;
            Ok(row(cfg.steps, t, ws[wi], obs.last().expect("at least one observation")))
        })?
    };
    let table = Table { columns, rows };
    let first_p = if w_grid.is_some() { 3 } else { 2 };
    let violation = check_mass(&table, first_p, n);
    let summary = format!("{} rows over {n} vertices", table.rows.len());
    Ok(Outcome { artifact: Artifact::Table(table), summary, violation })
}

/// Step time and coin amplitudes for one sweep value.
fn sweep_point(cfg: &SweepConfig, q: f64, coin_dim: usize) -> Result<(f64, CoinInit)> {
    let pad = |mut v: Vec<C64>| -> Result<CoinInit> {
        ensure!(v.len() <= coin_dim, "{:?} sweep needs at least {} labels", cfg.kind, v.len());
        v.resize(coin_dim, C64::new(0.0, 0.0));
        Ok(CoinInit::Amplitudes(v))
    };
    let re = |x: f64| C64::new(x, 0.0);
    let phase = C64::from_polar(1.0, -q * PI);
    Ok(match cfg.kind {
        SweepKind::Time => (q * PI, cfg.init.coin.clone()),
        SweepKind::Mix2 => (cfg.t, pad(vec![re(q), re((1.0 - q * q).max(0.0).sqrt())])?),
        SweepKind::Mix3 => {
            let s = 1.0 / 3f64.sqrt();
            (cfg.t, pad(vec![re(s), re(q), re(s * (2.0 - 3.0 * q * q).max(0.0).sqrt())])?)
        }
        SweepKind::Phase2 => (cfg.t, pad(vec![re(1.0), phase])?),
        SweepKind::Phase3 => (cfg.t, pad(vec![re(1.0), phase, re(1.0)])?),
    })
}

fn sweep(cfg: &SweepConfig) -> Result<Outcome> {
    let graph = cfg.graph.resolve(None)?;
    let coin_dim = graph.labels().len();
    let walk = HybridWalk::new(graph, cfg.coin.clone())?;
    let n = walk.pos_dim();
    let qs = cfg.grid.values();
    let rows = try_par_map(&qs, |&q| -> Result<Vec<f64>> {
        let (t, coin) = sweep_point(cfg, q, coin_dim)?;
        let init = InitialState::new(coin, cfg.init.position);
        let traj = walk.run(t, cfg.steps, &init.build(walk.graph())?)?;
        let k = traj.len() - 1;
        let mut r = vec![q];
        r.extend(&traj.distributions[k]);
        r.push(traj.sigmas[k]);
        r.push(traj.entropies[k]);
        Ok(r)
    })?;
    let mut columns = vec![cfg.grid.name.clone()];
    columns.extend(coordinate_columns(walk.graph()));
    columns.push("sigma".into());
    columns.push("entropy".into());
    let table = Table { columns, rows };
    let violation = check_mass(&table, 1, n);
    let summary = format!("{} values of {} after {} steps", qs.len(), cfg.grid.name, cfg.steps);
    Ok(Outcome { artifact: Artifact::Table(table), summary, violation })
}

fn complex_json(z: C64) -> Value {
    json!([num12(z.re), num12(z.im)])
}

fn pst(cfg: &PstConfig) -> Result<Outcome> {
    let (doc, fidelity) = match cfg {
        PstConfig::Segment(m) => {
            let tr = segment_line_transfer(*m)?;
            let distributions = tr
                .states
                .iter()
                .map(|s| Ok(position_distribution(s, 2, *m)?.into_iter().map(num12).collect::<Vec<_>>()))
                .collect::<Result<Vec<_>>>()?;
            let doc = json!({
                "demo": "segment_line",
                "m": m,
                "active_labels": tr.active_labels,
                "distributions": distributions,
                "fidelity": num12(tr.arrival_probability),
            });
            (doc, tr.arrival_probability)
        }
        PstConfig::Plan { graph, source, target, path, alpha } => {
            let plan = PstPlan::new(graph.resolve(None)?, *source, *target, path.clone())?;
            let alpha = alpha.clone().unwrap_or_else(|| {
                let k = plan.num_colors();
                vec![C64::new(1.0 / (k as f64).sqrt(), 0.0); k]
            });
            let (_, tr) = run_pst(&plan, &alpha)?;
            let mut doc = Map::new();
            doc.insert("source".into(), json!(source));
            doc.insert("target".into(), json!(target));
            doc.insert("path".into(), json!(plan.path()));
            doc.insert("alpha".into(), Value::Array(alpha.iter().map(|&a| complex_json(a)).collect()));
            if let Value::Object(t) = tr.to_json() {
                doc.extend(t);
            }
            (Value::Object(doc), tr.fidelity)
        }
    };
    let violation = (fidelity <= PST_FIDELITY_FLOOR)
        .then(|| NumericalViolation(format!("fidelity {fidelity} is below {PST_FIDELITY_FLOOR}")));
    Ok(Outcome {
        artifact: Artifact::Json(doc),
        summary: format!("fidelity {}", crate::output::fmt12(fidelity)),
        violation,
    })
}

fn mode_fields(doc: &mut Map<String, Value>, mode: Mode) {
    match mode {
        Mode::Exact => {
            doc.insert("mode".into(), json!("exact"));
        }
        Mode::Shots { shots, seed } => {
            doc.insert("mode".into(), json!("shots"));
            doc.insert("shots".into(), json!(shots));
            doc.insert("seed".into(), json!(seed));
        }
    }
}

/// In shots mode `probability` is the observed frequency.
fn entry_json(e: &ProductEstimate) -> Value {
    let mut doc = Map::new();
    doc.insert("i".into(), json!(e.i));
    doc.insert("j".into(), json!(e.j));
    mode_fields(&mut doc, e.mode);
    doc.insert("probability".into(), num12(e.estimate));
    doc.insert("value".into(), num12(e.value));
    doc.insert("rounded".into(), json!(e.rounded()));
    Value::Object(doc)
}

fn sequence(cfg: &MatmulConfig) -> Result<RegularGraphSequence> {
    let graphs = cfg.factors.iter().map(|g| g.resolve(None)).collect::<Result<Vec<_>>>()?;
    Ok(RegularGraphSequence::from_graphs(&graphs)?)
}

fn matmul(cfg: &MatmulConfig, format: Format) -> Result<Outcome> {
    let seq = sequence(cfg)?;
    Ok(match cfg.target {
        MatmulTarget::Entry(i, j) => {
            let e = product_entry(&seq, i, j, cfg.mode)?;
            let summary = format!("C[{i},{j}] = {} (probability {})", e.rounded(), crate::output::fmt12(e.estimate));
            Outcome::ok(Artifact::Json(entry_json(&e)), summary)
        }
        MatmulTarget::Trace => {
            let trace = product_trace(&seq, cfg.mode)?;
            let mut doc = Map::new();
            mode_fields(&mut doc, cfg.mode);
            doc.insert("n".into(), json!(seq.n()));
            doc.insert("trace".into(), num12(trace));
            Outcome::ok(Artifact::Json(Value::Object(doc)), format!("trace {}", crate::output::fmt12(trace)))
        }
        MatmulTarget::Matrix => {
            let m = product_matrix(&seq, cfg.mode)?;
            let summary = format!("{n}x{n} product of {} factors", seq.len(), n = seq.n());
            match format {
                Format::Csv => {
                    let rows = m.iter().flatten().map(|e| vec![e.i as f64, e.j as f64, e.value]).collect();
                    let columns = ["i", "j", "value"].map(String::from).to_vec();
                    Outcome::ok(Artifact::Table(Table { columns, rows }), summary)
                }
                Format::Json => {
                    let mut doc = Map::new();
                    mode_fields(&mut doc, cfg.mode);
                    doc.insert("n".into(), json!(seq.n()));
                    let values: Vec<Vec<Value>> =
                        m.iter().map(|r| r.iter().map(|e| num12(e.value)).collect()).collect();
                    doc.insert("values".into(), json!(values));
                    Outcome::ok(Artifact::Json(Value::Object(doc)), summary)
                }
            }
        }
    })
}

fn triangles(cfg: &TrianglesConfig) -> Result<Outcome> {
    let g = cfg.graph.resolve(None)?;
    let mut doc = Map::new();
    mode_fields(&mut doc, cfg.mode);
    let count = match cfg.vertex {
        Some(k) => {
            if k >= g.n() {
                bail!("vertex {k} out of range for {} vertices", g.n());
            }
            doc.insert("vertex".into(), json!(k));
            triangles_at_vertex(&g, k, cfg.mode)?
        }
        None => triangle_count(&g, cfg.mode)?,
    };
    doc.insert("triangles".into(), json!(count));
    Ok(Outcome::ok(Artifact::Json(Value::Object(doc)), format!("{count} triangle(s)")))
}
