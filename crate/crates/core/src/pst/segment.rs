use std::f64::consts::FRAC_PI_2;

use crate::graphs::{build, GraphFamily};
use crate::linalg::{ComplexMatrix, StateVector};
use crate::walk::{CoinSpec, HybridWalk};

use super::PstError;

/// Record of a walk along a red/blue segment line.
#[derive(Clone, Debug)]
pub struct SegmentTransfer {
    /// State before the first step and after each step.
    pub states: Vec<StateVector>,
    /// Label of the occupied coin sector after each step.
    pub active_labels: Vec<String>,
    /// Probability of the last vertex at the end.
    pub arrival_probability: f64,
}

/// Walks `|b> (x) |first vertex>` along `segment_line(m)` in `m - 1` steps of
/// `t = pi/2`; the first coin is the identity and later coins swap `r` and `b`.
pub fn segment_line_transfer(m: usize) -> Result<SegmentTransfer, PstError> {
    let graph = build(&GraphFamily::SegmentLine { m })?;
    let blue = graph.label_index("b").expect("segment lines carry label b");
    let walk = HybridWalk::new(graph, CoinSpec::Identity)?;
    let prop = walk.propagator(FRAC_PI_2);
    let flip = CoinSpec::transpositions(2, &[(0, 1)])?.realize(2)?;
    let identity = ComplexMatrix::identity(2);

    let mut psi = StateVector::basis(2 * m, blue * m).with_factors(2, m)?;
    let mut states = vec![psi.clone()];
    let mut active_labels = Vec::with_capacity(m - 1);
    for k in 0..m - 1 {
        let coin = if k == 0 { &identity } else { &flip };
        psi = walk.step_with(&prop, coin, &psi);
        let a = psi.amplitudes();
        let weight = |c: usize| a[c * m..(c + 1) * m].iter().map(|x| x.norm_sqr()).sum::<f64>();
        let c = if weight(0) >= weight(1) { 0 } else { 1 };
        active_labels.push(walk.graph().labels()[c].clone());
        states.push(psi.clone());
    }
    let a = psi.amplitudes();
    let arrival_probability = a[m - 1].norm_sqr() + a[2 * m - 1].norm_sqr();
    Ok(SegmentTransfer { states, active_labels, arrival_probability })
}
