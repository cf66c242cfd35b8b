use crate::linalg::{evolve, ComplexMatrix, StateVector, C64};

use super::{Trajectory, WalkError};

/// `e^{-iAt} psi` with the adjacency (or any Hermitian matrix) as Hamiltonian.
pub fn continuous_walk(a: &ComplexMatrix, t: f64, psi: &StateVector) -> Result<StateVector, WalkError> {
    if psi.dim() != a.rows() {
        return Err(WalkError::DimensionMismatch { expected: a.rows(), found: psi.dim() });
    }
    Ok(evolve(a, t, psi)?)
}

/// `H(i,j) = delta_ij / sqrt2 - delta_{i+-1,j} / (2 sqrt2)` on `2L+1` sites.
pub fn line_reference_hamiltonian(half_len: usize) -> ComplexMatrix {
    let n = 2 * half_len + 1;
    let d = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
        0 => C64::new(d, 0.0),
        1 => C64::new(-d / 2.0, 0.0),
        _ => C64::new(0.0, 0.0),
    })
}

/// Coined walk on `2L+1` sites (coords `-L..=L`): each step applies the coin,
/// then moves coin 0 right and coin 1 left.
pub fn discrete_coined_walk(
    steps: usize,
    coin: &ComplexMatrix,
    psi0: &StateVector,
    half_len: usize,
) -> Result<Trajectory, WalkError> {
    let n = 2 * half_len + 1;
    if n < 2 * steps + 1 {
        return Err(WalkError::TruncationTooSmall { needed: 2 * steps + 1, have: n });
    }
    if coin.rows() != 2 || coin.cols() != 2 {
        return Err(WalkError::Coin(format!("coined line walk needs a 2x2 coin, got {}x{}", coin.rows(), coin.cols())));
    }
    if psi0.dim() != 2 * n {
        return Err(WalkError::DimensionMismatch { expected: 2 * n, found: psi0.dim() });
    }
    let coords: Vec<f64> = (0..n).map(|v| v as f64 - half_len as f64).collect();
    let mut traj = Trajectory::default();
    let mut psi = psi0.clone().with_factors(2, n)?;
    for k in 0..=steps {
        traj.record(&psi, 2, n, &coords)?;
        if k == steps {
            break;
        }
        let tossed = super::apply_coin(coin, psi.amplitudes(), n);
        let mut out = vec![C64::new(0.0, 0.0); 2 * n];
        out[1..n].copy_from_slice(&tossed[..n - 1]);
        out[n..2 * n - 1].copy_from_slice(&tossed[n + 1..]);
        psi = StateVector::new(out).with_factors(2, n)?;
    }
    Ok(traj)
}
