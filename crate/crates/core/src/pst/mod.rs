//! Perfect state transfer of a coin superposition along a path of a properly
//! edge-colored graph.
//!
//! Each color `c` gets a primed twin `c'` with an empty subgraph. Components
//! parked in primed sectors are left alone by `e^{-iHt}`, so the colors can be
//! moved from the source to the target one at a time. At `t = 3 pi / 2` a
//! matched pair evolves as `e^{-iX 3pi/2} = iX`, so each hop is exact up to a
//! factor `i`.

mod random;
mod segment;

pub use random::{random_instance, RandomInstance};
pub use segment::{segment_line_transfer, SegmentTransfer};

use std::f64::consts::PI;

use serde_json::{json, Value};
use thiserror::Error;

use crate::graphs::{ColoringViolation, GraphError, LabeledGraph};
use crate::linalg::{ComplexMatrix, LinalgError, StateVector, C64};
use crate::walk::{CoinSpec, HybridWalk, WalkError};

/// Step time of every walk in the protocol.
pub const STEP_TIME: f64 = 1.5 * PI;

/// Amplitudes below this count as zero when tallying active sectors.
const ACTIVE_CUTOFF: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PstError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("edge coloring is not proper: {0:?}")]
    ImproperColoring(Vec<ColoringViolation>),
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error("coin amplitudes are not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("numerical check failed: {0}")]
    Numerical(String),
}

/// Graph, endpoints, path, and the extended label set `colors ++ colors'`.
#[derive(Clone, Debug)]
pub struct PstPlan {
    graph: LabeledGraph,
    walk: HybridWalk,
    source: usize,
    target: usize,
    path: Vec<usize>,
    /// Color index of each path edge (`i_1 .. i_M`).
    path_colors: Vec<usize>,
}

impl PstPlan {
    /// Uses the BFS shortest path when `path` is `None`.
    pub fn new(graph: LabeledGraph, source: usize, target: usize, path: Option<Vec<usize>>) -> Result<Self, PstError> {
        let n = graph.n();
        for v in [source, target] {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n }.into());
            }
        }
        if source == target {
            return Err(PstError::InvalidPlan("source and target coincide".into()));
        }
        if graph.edges().iter().any(|e| e.is_loop()) {
            return Err(PstError::InvalidPlan("self-loops are not allowed".into()));
        }
        let report = graph.validate_proper_coloring();
        if !report.proper {
            return Err(PstError::ImproperColoring(report.violations));
        }
        let path = match path {
            Some(p) => p,
            None => graph
                .shortest_path(source, target)
                .ok_or_else(|| PstError::InvalidPlan(format!("no path from {source} to {target}")))?,
        };
        if path.first() != Some(&source) || path.last() != Some(&target) {
            return Err(PstError::InvalidPlan(format!("path {path:?} does not run from {source} to {target}")));
        }
        let colors: Vec<usize> = graph
            .path_colors(&path)?
            .iter()
            .map(|l| graph.label_index(l).expect("edge labels are registered"))
            .collect();
        for w in path.windows(2) {
            let e = graph.edges().iter().find(|e| e.touches(w[0]) && e.other(w[0]) == w[1]).expect("adjacent");
            if e.weight != 1.0 {
                return Err(PstError::InvalidPlan(format!("path edge ({}, {}) has weight {}", w[0], w[1], e.weight)));
            }
        }
        if colors.windows(2).any(|c| c[0] == c[1]) {
            return Err(PstError::InvalidPlan("consecutive path edges share a color".into()));
        }

        let mut extended = graph.clone();
        for l in graph.labels() {
            extended.add_label(primed(l))?;
        }
        let walk = HybridWalk::new(extended, CoinSpec::Identity)?;
        Ok(Self { graph, walk, source, target, path, path_colors: colors })
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn path(&self) -> &[usize] {
        &self.path
    }

    pub fn path_colors(&self) -> &[usize] {
        &self.path_colors
    }

    /// Number of colors `N`; the coin dimension is `2N`.
    pub fn num_colors(&self) -> usize {
        self.graph.labels().len()
    }

    /// Number of path edges `M`.
    pub fn path_len(&self) -> usize {
        self.path_colors.len()
    }

    /// Labels of the coin basis: the colors, then their primed twins.
    pub fn coin_labels(&self) -> &[String] {
        self.walk.graph().labels()
    }

    pub fn build_operators(&self) -> Result<PstOperators, PstError> {
        let n = self.num_colors();
        let dim = 2 * n;
        let colors = &self.path_colors;
        let (first, last) = (colors[0], colors[colors.len() - 1]);
        let swap = |pairs: &[(usize, usize)]| -> Result<ComplexMatrix, PstError> {
            let m = CoinSpec::transpositions(dim, pairs)?.realize(dim)?;
            let defect = m.unitarity_defect()?;
            if defect >= 1e-12 {
                return Err(PstError::Numerical(format!("coin operator unitarity defect {defect:e}")));
            }
            Ok(m)
        };
        let pairs: Vec<(usize, usize)> = (0..n).map(|i| (i, n + i)).collect();
        Ok(PstOperators {
            p: swap(&pairs)?,
            c: colors.windows(2).map(|w| swap(&[(w[0], w[1])])).collect::<Result<_, _>>()?,
            d: (0..n).map(|l| swap(&[(first, n + l)])).collect::<Result<_, _>>()?,
            e: (0..n).map(|l| swap(&[(last, n + l)])).collect::<Result<_, _>>()?,
        })
    }

    fn state(&self, coin: &[C64], vertex: usize) -> StateVector {
        StateVector::coin_at(coin, self.graph.n(), vertex)
    }

    /// `sum_i alpha_i |c_i> (x) |v>` in the `2N`-dimensional coin space.
    pub fn embed(&self, alpha: &[C64], vertex: usize, primed: bool) -> StateVector {
        let n = self.num_colors();
        let mut coin = vec![C64::new(0.0, 0.0); 2 * n];
        let offset = if primed { n } else { 0 };
        coin[offset..offset + n].copy_from_slice(alpha);
        self.state(&coin, vertex)
    }
}

fn primed(label: &str) -> String {
    format!("{label}'")
}

/// Coin-space permutations of the protocol, indexed from zero
/// (`c[k]` is `C_{k+1}`, `d[l]` is `D_{l+1}`, `e[l]` is `E_{l+1}`).
#[derive(Clone, Debug)]
pub struct PstOperators {
    /// Swaps every color with its primed twin.
    pub p: ComplexMatrix,
    /// Swaps consecutive path colors.
    pub c: Vec<ComplexMatrix>,
    /// Swaps the first path color with the `l`-th primed color.
    pub d: Vec<ComplexMatrix>,
    /// Swaps the last path color with the `l`-th primed color.
    pub e: Vec<ComplexMatrix>,
}

/// A named intermediate state.
#[derive(Clone, Debug)]
pub struct Stage {
    pub name: String,
    pub state: StateVector,
}

/// Bookkeeping for one iteration of the transfer loop.
#[derive(Clone, Debug)]
pub struct IterationCheck {
    /// `|<phi_l|psi>|` against the expected state after the iteration.
    pub fidelity: f64,
    /// `max |psi - phi_l|` with no phase alignment.
    pub phase_error: f64,
    /// Largest number of occupied unprimed sectors seen during the walks.
    pub max_active_sectors: usize,
}

#[derive(Clone, Debug)]
pub struct PstTranscript {
    pub stages: Vec<Stage>,
    pub iterations: Vec<IterationCheck>,
    /// `i^M`.
    pub expected_phase: C64,
    /// `<c_i, b|final> / alpha_i` for every nonzero `alpha_i`.
    pub component_phases: Vec<Option<C64>>,
    pub fidelity: f64,
    coin_labels: Vec<String>,
    pos_dim: usize,
}

impl PstTranscript {
    /// Stages as `{name, norm, amplitudes: [[coin, vertex, re, im], ...]}` keeping
    /// only amplitudes above 1e-12.
    pub fn to_json(&self) -> Value {
        let n = self.pos_dim;
        let stages: Vec<Value> = self
            .stages
            .iter()
            .map(|s| {
                let amps: Vec<Value> = s
                    .state
                    .amplitudes()
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.norm() > ACTIVE_CUTOFF)
                    .map(|(i, a)| json!([self.coin_labels[i / n], i % n, a.re, a.im]))
                    .collect();
                json!({"name": s.name, "norm": s.state.norm(), "amplitudes": amps})
            })
            .collect();
        let iterations: Vec<Value> = self
            .iterations
            .iter()
            .map(|c| {
                json!({
                    "fidelity": c.fidelity,
                    "phase_error": c.phase_error,
                    "max_active_sectors": c.max_active_sectors,
                })
            })
            .collect();
        let phases: Vec<Value> =
            self.component_phases.iter().map(|p| p.map_or(Value::Null, |p| json!([p.re, p.im]))).collect();
        json!({
            "stages": stages,
            "iterations": iterations,
            "expected_phase": [self.expected_phase.re, self.expected_phase.im],
            "component_phases": phases,
            "fidelity": self.fidelity,
        })
    }
}

fn active_sectors(psi: &StateVector, colors: usize, pos_dim: usize) -> usize {
    let a = psi.amplitudes();
    (0..colors).filter(|&c| a[c * pos_dim..(c + 1) * pos_dim].iter().any(|x| x.norm() > ACTIVE_CUTOFF)).count()
}

fn max_diff(a: &StateVector, b: &StateVector) -> f64 {
    a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Runs the transfer of `sum_i alpha_i |c_i> (x) |source>` to the target.
pub fn run_pst(plan: &PstPlan, alpha: &[C64]) -> Result<(StateVector, PstTranscript), PstError> {
    let n = plan.num_colors();
    if alpha.len() != n {
        return Err(PstError::InvalidPlan(format!("{} amplitudes for {n} colors", alpha.len())));
    }
    let norm = alpha.iter().map(|a| a.norm_sqr()).sum::<f64>();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(PstError::NotNormalized(norm));
    }
    let ops = plan.build_operators()?;
    let walk = &plan.walk;
    let prop = walk.propagator(STEP_TIME);
    let pos_dim = plan.graph.n();
    let m = plan.path_len();
    let phase = C64::i().powu(m as u32);

    let mut stages = Vec::new();
    let mut record = |name: String, psi: &StateVector| -> Result<(), PstError> {
        let dev = (psi.norm_sqr() - 1.0).abs();
        if dev > 1e-10 {
            return Err(PstError::Numerical(format!("norm drift {dev:e} at stage {name}")));
        }
        stages.push(Stage { name, state: psi.clone() });
        Ok(())
    };

    let mut psi = plan.embed(alpha, plan.source, false);
    record("initial".into(), &psi)?;
    psi = walk.coin_step(&ops.p, &psi);
    record("P".into(), &psi)?;

    let mut iterations = Vec::with_capacity(n);
    for l in 0..n {
        let mut max_active = 0;
        psi = walk.step_with(&prop, &ops.d[l], &psi);
        max_active = max_active.max(active_sectors(&psi, n, pos_dim));
        record(format!("iteration {}: D then walk", l + 1), &psi)?;
        for (k, c) in ops.c.iter().enumerate() {
            psi = walk.step_with(&prop, c, &psi);
            max_active = max_active.max(active_sectors(&psi, n, pos_dim));
            record(format!("iteration {}: C{} then walk", l + 1, k + 1), &psi)?;
        }
        psi = walk.coin_step(&ops.e[l], &psi);
        record(format!("iteration {}: E", l + 1), &psi)?;

        let mut expected = vec![C64::new(0.0, 0.0); 2 * n * pos_dim];
        for (i, &a) in alpha.iter().enumerate() {
            let (v, amp) = if i <= l { (plan.target, phase * a) } else { (plan.source, a) };
            expected[(n + i) * pos_dim + v] = amp;
        }
        let expected = StateVector::new(expected);
        iterations.push(IterationCheck {
            fidelity: expected.inner(&psi)?.norm(),
            phase_error: max_diff(&expected, &psi),
            max_active_sectors: max_active,
        });
    }
    psi = walk.coin_step(&ops.p, &psi);
    record("final P".into(), &psi)?;

    let component_phases = alpha
        .iter()
        .enumerate()
        .map(|(i, &a)| (a.norm() > ACTIVE_CUTOFF).then(|| psi.amplitudes()[i * pos_dim + plan.target] / a))
        .collect();
    let fidelity = verify_pst(&psi, alpha, plan.target)?;
    let transcript = PstTranscript {
        stages,
        iterations,
        expected_phase: phase,
        component_phases,
        fidelity,
        coin_labels: plan.coin_labels().to_vec(),
        pos_dim,
    };
    Ok((psi, transcript))
}

/// `|<sum_i alpha_i |c_i> (x) |b>, final>|` with the coin space of `final`
/// taken as `2 * alpha.len()` dimensional.
pub fn verify_pst(final_state: &StateVector, alpha: &[C64], target: usize) -> Result<f64, PstError> {
    let coin_dim = 2 * alpha.len();
    if coin_dim == 0 || final_state.dim() % coin_dim != 0 {
        return Err(LinalgError::DimensionMismatch { expected: coin_dim, found: final_state.dim() }.into());
    }
    let pos_dim = final_state.dim() / coin_dim;
    if target >= pos_dim {
        return Err(GraphError::VertexOutOfRange { vertex: target, n: pos_dim }.into());
    }
    let a = final_state.amplitudes();
    let overlap: C64 = alpha.iter().enumerate().map(|(i, x)| x.conj() * a[i * pos_dim + target]).sum();
    Ok(overlap.norm())
}
