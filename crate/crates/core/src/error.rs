//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (asymmetry {deviation:.3e}, allowed {allowed:.3e})")]
    NonHermitian { deviation: f64, allowed: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    #[error("trace is {trace:.12e}, expected 1")]
    NotUnitTrace { trace: f64 },

    #[error("vector norm is {norm:.12e}, expected 1")]
    NotNormalized { norm: f64 },

    #[error("Kraus set is not trace preserving (deviation {deviation:.3e})")]
    NotTracePreserving { deviation: f64 },

    #[error("columns are not orthonormal (deviation {deviation:.3e})")]
    NotIsometry { deviation: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Shorthand for a `DimensionMismatch` with a formatted context string.
    pub fn dims(context: impl Into<String>) -> Self {
        Error::DimensionMismatch {
            context: context.into(),
        }
    }
}
