//! Error type shared by all modules of the crate.

use std::fmt;

/// Errors surfaced by matrix operations, decompositions, and symmetry checks.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operand shapes are incompatible.
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    /// A pivot fell below the singularity threshold during elimination.
    SingularMatrix,
    /// The eigensolver did not meet the requested residual within its sweep cap.
    ConvergenceFailure(String),
    /// The matrix does not admit a complete biorthonormal eigensystem at
    /// working precision (coalesced eigenvectors, singular Gram block, or
    /// residuals that cannot meet the requested tolerance).
    DefectiveMatrix(String),
    /// The metric operator fails its invertibility invariant.
    SingularMetric {
        min_abs_eigenvalue: f64,
        threshold: f64,
    },
    /// The antilinear operator does not commute with the Hamiltonian at the
    /// requested tolerance.
    SymmetryAbsent { residual: f64, tol: f64 },
    /// A matrix or vector entry is NaN or infinite.
    NonFiniteEntry,
    /// A constructor argument is out of its documented domain.
    InvalidInput(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { left, right } => {
                write!(
                    f,
                    "dimension mismatch: {}x{} vs {}x{}",
                    left.0, left.1, right.0, right.1
                )
            }
            Error::SingularMatrix => write!(f, "matrix is singular to working precision"),
            Error::ConvergenceFailure(msg) => write!(f, "eigensolver failed to converge: {msg}"),
            Error::DefectiveMatrix(msg) => {
                write!(f, "no complete biorthonormal eigensystem: {msg}")
            }
            Error::SingularMetric {
                min_abs_eigenvalue,
                threshold,
            } => write!(
                f,
                "metric is not invertible: min |eigenvalue| {min_abs_eigenvalue:.3e} below threshold {threshold:.3e}"
            ),
            Error::SymmetryAbsent { residual, tol } => write!(
                f,
                "antilinear symmetry absent: commutation residual {residual:.3e} exceeds tolerance {tol:.3e}"
            ),
            Error::NonFiniteEntry => write!(f, "non-finite entry (NaN or infinity)"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
