use std::f64::consts::PI;

use crate::graphs::{build, GraphFamily};
use crate::linalg::{kron, phase_aligned_distance, ComplexMatrix, C64};

use super::{CoinSpec, HybridWalk};

/// `P_1(t) = (sin^2(at) + sin^2(bt)) / 2` for the two-label 2-cycle started in `|00>`
/// under a Hadamard coin.
pub fn oracle_p1_two_cycle(a: f64, b: f64, t: f64) -> f64 {
    0.5 * (1.0 - ((a + b) * t).cos() * ((a - b) * t).cos())
}

/// `P_1(t) = sin^2(omega t)` for the continuous walk on a 2-cycle of weight `omega`.
pub fn oracle_continuous_two_cycle(omega: f64, t: f64) -> f64 {
    (omega * t).sin().powi(2)
}

/// A time and diagonal coin at which the 2-cycle walk is a CNOT
/// (coin controls, position is the target).
#[derive(Clone, Debug)]
pub struct CnotGate {
    pub t: f64,
    pub k: u32,
    pub l: u32,
    pub coin: ComplexMatrix,
    /// Distance to CNOT after global phase alignment.
    pub distance: f64,
}

const SEARCH_BOUND: u32 = 10_000;

/// Smallest `t = k pi / a = (pi/2 + l pi) / b` with `a/b = 2k/(1+2l)`, checked
/// against CNOT up to a global phase within 1e-9.
pub fn cnot_realizability(a: f64, b: f64) -> Option<CnotGate> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return None;
    }
    let ratio = a / b;
    (1..=SEARCH_BOUND).find_map(|k| {
        let l = ((2.0 * k as f64 / ratio - 1.0) / 2.0).round();
        if !(0.0..=SEARCH_BOUND as f64).contains(&l) {
            return None;
        }
        if (ratio - 2.0 * k as f64 / (1.0 + 2.0 * l)).abs() >= 1e-9 {
            return None;
        }
        verify(a, b, k, l as u32)
    })
}

fn verify(a: f64, b: f64, k: u32, l: u32) -> Option<CnotGate> {
    let t = k as f64 * PI / a;
    let walk = HybridWalk::new(build(&GraphFamily::Circle2 { a, b }).ok()?, CoinSpec::Identity).ok()?;
    let s = walk.operator_matrix(t);
    let (s0, s1) = (s[(0, 0)], s[(2, 3)]);
    if (s0.norm() - 1.0).abs() > 1e-9 || (s1.norm() - 1.0).abs() > 1e-9 {
        return None;
    }
    let coin = ComplexMatrix::diagonal(&[s0.conj() / s0.norm(), s1.conj() / s1.norm()]);
    let w = walk.operator_matrix_with_coin(t, &coin);
    let one = C64::new(1.0, 0.0);
    let cnot = &kron(&ComplexMatrix::diagonal(&[one, C64::new(0.0, 0.0)]), &ComplexMatrix::identity(2))
        + &kron(&ComplexMatrix::diagonal(&[C64::new(0.0, 0.0), one]), &ComplexMatrix::pauli_x());
    let distance = phase_aligned_distance(&w, &cnot).ok()?;
    (distance < 1e-9).then_some(CnotGate { t, k, l, coin, distance })
}
