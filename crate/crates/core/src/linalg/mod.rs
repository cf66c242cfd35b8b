//! Dense complex linear algebra used by every walk in the crate.
//!
//! Matrices are stored row-major as [`ComplexMatrix`]. Time evolution goes
//! through a Hermitian eigendecomposition ([`hermitian_eig`]) so one
//! factorization can be reused for many evolution times.

mod eig;
mod matrix;
mod ops;
mod state;

pub use eig::{evolve, hermitian_eig, Eigen};
pub use matrix::ComplexMatrix;
pub use ops::{
    fidelity, kron, partial_trace_coin, partial_trace_position, phase_aligned_distance, von_neumann_entropy,
};
pub use state::{DensityOperator, StateVector};

use thiserror::Error;

pub use num_complex::Complex64 as C64;

/// Tolerance on `max |M[i][j] - conj(M[j][i])|` for a matrix to count as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Eigenvalues of a density operator below this contribute nothing to entropy.
pub const ENTROPY_CUTOFF: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid density operator: {0}")]
    InvalidDensity(String),
    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),
}
