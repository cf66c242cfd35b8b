use std::f64::consts::PI;
use std::str::FromStr;

use crate::linalg::{ComplexMatrix, C64};

use super::WalkError;

/// Coin operator acting on the label (coin) space.
#[derive(Clone, Debug, PartialEq)]
pub enum CoinSpec {
    Identity,
    /// 2x2 only.
    Hadamard,
    /// `omega^{jk} / sqrt(N)`, `omega = e^{2 pi i / N}`.
    Fourier,
    /// `2|s><s| - I` with `|s>` uniform.
    Grover,
    /// Basis map `|i> -> |image[i]>`.
    Permutation(Vec<usize>),
    Custom(ComplexMatrix),
}

impl CoinSpec {
    /// Permutation coin built from disjoint transpositions; other basis states stay fixed.
    pub fn transpositions(dim: usize, swaps: &[(usize, usize)]) -> Result<Self, WalkError> {
        let mut image: Vec<usize> = (0..dim).collect();
        for &(a, b) in swaps {
            if a >= dim || b >= dim {
                return Err(WalkError::Coin(format!("transposition ({a}, {b}) outside dimension {dim}")));
            }
            image.swap(a, b);
        }
        Ok(Self::Permutation(image))
    }

    /// Concrete matrix in dimension `dim`, checked unitary within 1e-10.
    pub fn realize(&self, dim: usize) -> Result<ComplexMatrix, WalkError> {
        let m = match self {
            Self::Identity => ComplexMatrix::identity(dim),
            Self::Hadamard => {
                if dim != 2 {
                    return Err(WalkError::Coin(format!("Hadamard coin needs dimension 2, got {dim}")));
                }
                let h = std::f64::consts::FRAC_1_SQRT_2;
                ComplexMatrix::from_real(2, 2, &[h, h, h, -h]).unwrap()
            }
            Self::Fourier => {
                let norm = 1.0 / (dim as f64).sqrt();
                ComplexMatrix::from_fn(dim, dim, |j, k| {
                    C64::from_polar(norm, 2.0 * PI * ((j * k) % dim) as f64 / dim as f64)
                })
            }
            Self::Grover => {
                let s = 2.0 / dim as f64;
                ComplexMatrix::from_fn(dim, dim, |j, k| C64::new(if j == k { s - 1.0 } else { s }, 0.0))
            }
            Self::Permutation(image) => {
                if image.len() != dim {
                    return Err(WalkError::Coin(format!(
                        "permutation has {} entries, coin dimension is {dim}",
                        image.len()
                    )));
                }
                let mut hit = vec![false; dim];
                let mut m = ComplexMatrix::zeros(dim, dim);
                for (i, &j) in image.iter().enumerate() {
                    if j >= dim || hit[j] {
                        return Err(WalkError::Coin(format!("{image:?} is not a permutation")));
                    }
                    hit[j] = true;
                    m[(j, i)] = C64::new(1.0, 0.0);
                }
                m
            }
            Self::Custom(m) => {
                if m.rows() != dim || m.cols() != dim {
                    return Err(WalkError::Coin(format!(
                        "custom coin is {}x{}, coin dimension is {dim}",
                        m.rows(),
                        m.cols()
                    )));
                }
                m.clone()
            }
        };
        let defect = m.unitarity_defect()?;
        if defect >= 1e-10 {
            return Err(WalkError::Coin(format!("coin is not unitary (defect {defect:e})")));
        }
        Ok(m)
    }
}

/// `identity`, `hadamard`, `fourier`, `grover`, or `perm:i0,i1,...`.
impl FromStr for CoinSpec {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "identity" | "I" => Ok(Self::Identity),
            "hadamard" | "H" => Ok(Self::Hadamard),
            "fourier" => Ok(Self::Fourier),
            "grover" => Ok(Self::Grover),
            _ => match s.strip_prefix("perm:") {
                Some(list) => list
                    .split(',')
                    .map(|x| x.trim().parse::<usize>())
                    .collect::<Result<Vec<_>, _>>()
                    .map(Self::Permutation)
                    .map_err(|_| WalkError::Coin(format!("bad permutation {list:?}"))),
                None => Err(WalkError::Coin(format!("unknown coin {s:?}"))),
            },
        }
    }
}
