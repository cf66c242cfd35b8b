use num_complex::ComplexFloat;

use super::{
    hermitian_eig, ComplexMatrix, DensityOperator, LinalgError, StateVector, C64, ENTROPY_CUTOFF, HERMITIAN_TOL,
};

/// Tensor product `A (x) B`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

fn check_factorization(rho: &DensityOperator, coin_dim: usize, pos_dim: usize) -> Result<(), LinalgError> {
    if rho.dim() != coin_dim * pos_dim {
        return Err(LinalgError::DimensionMismatch { expected: coin_dim * pos_dim, found: rho.dim() });
    }
    Ok(())
}

/// Traces out the coin factor of a `coin (x) position` density operator.
pub fn partial_trace_coin(
    rho: &DensityOperator,
    coin_dim: usize,
    pos_dim: usize,
) -> Result<DensityOperator, LinalgError> {
    check_factorization(rho, coin_dim, pos_dim)?;
    let m = rho.matrix();
    let out = ComplexMatrix::from_fn(pos_dim, pos_dim, |u, v| {
        (0..coin_dim).map(|c| m[(c * pos_dim + u, c * pos_dim + v)]).sum()
    });
    Ok(DensityOperator::from_matrix_unchecked(out))
}

/// Traces out the position factor, leaving the coin-space density operator.
pub fn partial_trace_position(
    rho: &DensityOperator,
    coin_dim: usize,
    pos_dim: usize,
) -> Result<DensityOperator, LinalgError> {
    check_factorization(rho, coin_dim, pos_dim)?;
    let m = rho.matrix();
    let out = ComplexMatrix::from_fn(coin_dim, coin_dim, |c, d| {
        (0..pos_dim).map(|v| m[(c * pos_dim + v, d * pos_dim + v)]).sum()
    });
    Ok(DensityOperator::from_matrix_unchecked(out))
}

/// Von Neumann entropy in bits, `-sum l log2 l` over eigenvalues above 1e-12.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64, LinalgError> {
    let m = rho.matrix();
    let asym = m.hermitian_asymmetry()?;
    if asym >= HERMITIAN_TOL {
        return Err(LinalgError::InvalidDensity(format!("not Hermitian (asymmetry {asym:e})")));
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(LinalgError::InvalidDensity(format!("trace {tr} != 1")));
    }
    let eig = hermitian_eig(m)?;
    let s: f64 = eig.values.iter().filter(|&&l| l > ENTROPY_CUTOFF).map(|&l| -l * l.log2()).sum();
    Ok(s.max(0.0))
}

/// Global-phase-insensitive overlap `|<psi|phi>|`.
pub fn fidelity(psi: &StateVector, phi: &StateVector) -> Result<f64, LinalgError> {
    Ok(psi.inner(phi)?.abs())
}

/// `max |e^{i theta} U - V|` with `theta = arg tr(U^dagger V)`, the phase that
/// maximizes `|tr(U^dagger V)|`.
pub fn phase_aligned_distance(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<f64, LinalgError> {
    if (u.rows(), u.cols()) != (v.rows(), v.cols()) {
        return Err(LinalgError::DimensionMismatch { expected: u.rows() * u.cols(), found: v.rows() * v.cols() });
    }
    let overlap: C64 = u.as_slice().iter().zip(v.as_slice()).map(|(a, b)| a.conj() * b).sum();
    let phase = if overlap.abs() > 0.0 { overlap / overlap.abs() } else { C64::new(1.0, 0.0) };
    Ok(u.as_slice().iter().zip(v.as_slice()).map(|(a, b)| (a * phase - b).abs()).fold(0.0, f64::max))
}
