use super::{hermitian_eig, ComplexMatrix, LinalgError, C64, HERMITIAN_TOL};

/// Pure state over a `dim`-dimensional basis.
///
/// When the basis is a coin/position product, `factors` records
/// `(coin_dim, pos_dim)` with index `c * pos_dim + v` for `|c> (x) |v>`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
    factors: Option<(usize, usize)>,
}

impl StateVector {
    pub fn new(amps: Vec<C64>) -> Self {
        Self { amps, factors: None }
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[k] = C64::new(1.0, 0.0);
        Self::new(amps)
    }

    /// `|coin> (x) |pos>`.
    pub fn product(coin: &[C64], pos: &[C64]) -> Self {
        let amps = coin.iter().flat_map(|&a| pos.iter().map(move |&b| a * b)).collect();
        Self { amps, factors: Some((coin.len(), pos.len())) }
    }

    /// `|coin> (x) |vertex>` with the coin given by amplitudes.
    pub fn coin_at(coin: &[C64], pos_dim: usize, vertex: usize) -> Self {
        let mut pos = vec![C64::new(0.0, 0.0); pos_dim];
        pos[vertex] = C64::new(1.0, 0.0);
        Self::product(coin, &pos)
    }

    pub fn with_factors(mut self, coin_dim: usize, pos_dim: usize) -> Result<Self, LinalgError> {
        if coin_dim * pos_dim != self.amps.len() {
            return Err(LinalgError::DimensionMismatch { expected: self.amps.len(), found: coin_dim * pos_dim });
        }
        self.factors = Some((coin_dim, pos_dim));
        Ok(self)
    }

    pub fn factors(&self) -> Option<(usize, usize)> {
        self.factors
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            self.amps.iter_mut().for_each(|a| *a /= n);
        }
        self
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<C64, LinalgError> {
        if self.dim() != other.dim() {
            return Err(LinalgError::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn check_normalized(&self, tol: f64) -> Result<(), LinalgError> {
        let n2 = self.norm_sqr();
        if (n2 - 1.0).abs() > tol {
            return Err(LinalgError::NotNormalized(n2));
        }
        Ok(())
    }
}

/// Density operator: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// `|psi><psi|`.
    pub fn from_pure(psi: &StateVector) -> Self {
        let a = psi.amplitudes();
        let matrix = ComplexMatrix::from_fn(a.len(), a.len(), |i, j| a[i] * a[j].conj());
        Self { matrix }
    }

    /// Validates Hermiticity (1e-12), unit trace (1e-10) and eigenvalues >= -1e-10.
    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self, LinalgError> {
        let asym = matrix.hermitian_asymmetry()?;
        if asym >= HERMITIAN_TOL {
            return Err(LinalgError::InvalidDensity(format!("not Hermitian (asymmetry {asym:e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(LinalgError::InvalidDensity(format!("trace {tr} != 1")));
        }
        let eig = hermitian_eig(&matrix)?;
        if let Some(&lo) = eig.values.first() {
            if lo < -1e-10 {
                return Err(LinalgError::InvalidDensity(format!("negative eigenvalue {lo:e}")));
            }
        }
        Ok(Self { matrix })
    }

    /// Skips validation; callers guarantee the density-operator properties.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    /// `alpha * a + (1 - alpha) * b` for `alpha` in `[0, 1]`.
    pub fn mix(alpha: f64, a: &Self, b: &Self) -> Result<Self, LinalgError> {
        if a.dim() != b.dim() {
            return Err(LinalgError::DimensionMismatch { expected: a.dim(), found: b.dim() });
        }
        let m = &a.matrix.scale(C64::new(alpha, 0.0)) + &b.matrix.scale(C64::new(1.0 - alpha, 0.0));
        Ok(Self { matrix: m })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_state_layout_is_coin_major() {
        let s = StateVector::coin_at(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0)], 3, 2);
        assert_eq!(s.factors(), Some((2, 3)));
        assert_eq!(s.amplitudes()[5], C64::new(1.0, 0.0));
    }

    #[test]
    fn density_validation_rejects_bad_trace() {
        let m = ComplexMatrix::identity(2);
        assert!(matches!(DensityOperator::from_matrix(m), Err(LinalgError::InvalidDensity(_))));
    }

    #[test]
    fn density_validation_rejects_negative_spectrum() {
        let m = ComplexMatrix::from_real(2, 2, &[1.5, 0.0, 0.0, -0.5]).unwrap();
        assert!(DensityOperator::from_matrix(m).is_err());
    }

    #[test]
    fn inner_product_dimension_mismatch() {
        let a = StateVector::basis(2, 0);
        let b = StateVector::basis(3, 0);
        assert!(a.inner(&b).is_err());
    }
}
