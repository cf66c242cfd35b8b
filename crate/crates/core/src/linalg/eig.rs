use faer::complex_native::c64;
use faer::{Mat, Side};

use super::{ComplexMatrix, LinalgError, StateVector, C64, HERMITIAN_TOL};

/// Spectral factorization `M = V diag(values) V^dagger` with ascending eigenvalues.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// Eigenvectors stored as columns.
    pub vectors: ComplexMatrix,
}

impl Eigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `V f(diag(values)) V^dagger`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let n = self.dim();
        let phases: Vec<C64> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        let scaled = ComplexMatrix::from_fn(n, n, |i, k| v[(i, k)] * phases[k]);
        scaled.matmul(&v.adjoint()).expect("square factors")
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| C64::new(l, 0.0))
    }

    /// `e^{-iMt}`.
    pub fn propagator(&self, t: f64) -> ComplexMatrix {
        self.map_spectrum(|l| C64::from_polar(1.0, -l * t))
    }

    /// `e^{-iMt} psi` without forming the propagator.
    pub fn evolve(&self, t: f64, psi: &[C64]) -> Result<Vec<C64>, LinalgError> {
        let n = self.dim();
        if psi.len() != n {
            return Err(LinalgError::DimensionMismatch { expected: n, found: psi.len() });
        }
        let v = &self.vectors;
        let coeffs: Vec<C64> = (0..n)
            .map(|k| {
                let overlap: C64 = (0..n).map(|i| v[(i, k)].conj() * psi[i]).sum();
                overlap * C64::from_polar(1.0, -self.values[k] * t)
            })
            .collect();
        Ok((0..n).map(|i| (0..n).map(|k| v[(i, k)] * coeffs[k]).sum()).collect())
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Fails with [`LinalgError::NotHermitian`] naming the worst asymmetry when
/// `max |M[i][j] - conj(M[j][i])| >= 1e-12`.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<Eigen, LinalgError> {
    let asym = m.hermitian_asymmetry()?;
    if asym >= HERMITIAN_TOL {
        return Err(LinalgError::NotHermitian(asym));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Eigen { values: vec![], vectors: ComplexMatrix::zeros(0, 0) });
    }
    let a = Mat::<c64>::from_fn(n, n, |i, j| {
        let z = m[(i, j)];
        c64::new(z.re, z.im)
    });
    let decomp = a.selfadjoint_eigendecomposition(Side::Lower);
    let (u, s) = (decomp.u(), decomp.s().column_vector());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| s.read(x).re.total_cmp(&s.read(y).re));
    let values = order.iter().map(|&k| s.read(k).re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, col| {
        let z = u.read(i, order[col]);
        C64::new(z.re, z.im)
    });
    Ok(Eigen { values, vectors })
}

/// `e^{-iHt} psi` for Hermitian `H`.
pub fn evolve(h: &ComplexMatrix, t: f64, psi: &StateVector) -> Result<StateVector, LinalgError> {
    if h.rows() != psi.dim() {
        return Err(LinalgError::DimensionMismatch { expected: h.rows(), found: psi.dim() });
    }
    let eig = hermitian_eig(h)?;
    let amps = eig.evolve(t, psi.amplitudes())?;
    let out = StateVector::new(amps);
    Ok(match psi.factors() {
        Some((c, p)) => out.with_factors(c, p)?,
        None => out,
    })
}
