use crate::linalg::{von_neumann_entropy, ComplexMatrix, DensityOperator, StateVector};

use super::WalkError;

fn check_dims(psi: &StateVector, coin_dim: usize, pos_dim: usize) -> Result<(), WalkError> {
    if psi.dim() != coin_dim * pos_dim {
        return Err(WalkError::DimensionMismatch { expected: coin_dim * pos_dim, found: psi.dim() });
    }
    Ok(())
}

/// `P(v) = sum_c |<c, v|psi>|^2`.
pub fn position_distribution(psi: &StateVector, coin_dim: usize, pos_dim: usize) -> Result<Vec<f64>, WalkError> {
    check_dims(psi, coin_dim, pos_dim)?;
    let a = psi.amplitudes();
    Ok((0..pos_dim).map(|v| (0..coin_dim).map(|c| a[c * pos_dim + v].norm_sqr()).sum()).collect())
}

/// Standard deviation of `coords` under the distribution `p`.
pub fn std_dev(p: &[f64], coords: &[f64]) -> Result<f64, WalkError> {
    if p.len() != coords.len() {
        return Err(WalkError::DimensionMismatch { expected: coords.len(), found: p.len() });
    }
    let mean: f64 = p.iter().zip(coords).map(|(p, x)| p * x).sum();
    let var: f64 = p.iter().zip(coords).map(|(p, x)| p * (x - mean).powi(2)).sum();
    Ok(var.max(0.0).sqrt())
}

/// Coin/position entanglement entropy of a pure state, in bits.
///
/// Uses the coin-side reduced density; it shares its nonzero spectrum with
/// the position-side one.
pub fn entanglement_entropy(psi: &StateVector, coin_dim: usize, pos_dim: usize) -> Result<f64, WalkError> {
    check_dims(psi, coin_dim, pos_dim)?;
    let a = psi.amplitudes();
    let rho = ComplexMatrix::from_fn(coin_dim, coin_dim, |c, d| {
        let (x, y) = (&a[c * pos_dim..(c + 1) * pos_dim], &a[d * pos_dim..(d + 1) * pos_dim]);
        x.iter().zip(y).map(|(x, y)| x * y.conj()).sum()
    });
    Ok(von_neumann_entropy(&DensityOperator::from_matrix_unchecked(rho))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{partial_trace_coin, C64};

    #[test]
    fn product_state_has_zero_entropy() {
        let psi =
            StateVector::product(&[C64::new(0.6, 0.0), C64::new(0.0, 0.8)], &[C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        assert!(entanglement_entropy(&psi, 2, 2).unwrap().abs() < 1e-12);
    }

    #[test]
    fn bell_state_has_one_bit() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = StateVector::new(vec![C64::new(h, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(h, 0.0)]);
        assert!((entanglement_entropy(&psi, 2, 2).unwrap() - 1.0).abs() < 1e-12);
        let via_position =
            von_neumann_entropy(&partial_trace_coin(&DensityOperator::from_pure(&psi), 2, 2).unwrap()).unwrap();
        assert!((via_position - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distribution_and_sigma() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = StateVector::new(vec![
            C64::new(h, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, h),
        ]);
        let p = position_distribution(&psi, 2, 3).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-15 && p[1] == 0.0 && (p[2] - 0.5).abs() < 1e-15);
        assert!((std_dev(&p, &[-1.0, 0.0, 1.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!(std_dev(&p, &[0.0]).is_err());
    }
}
