use thiserror::Error;

use crate::lie_core::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(Box<ValidationReport>),

    #[error("gram matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("operator is not symmetric (defect {defect:.3e})")]
    NotSymmetric { defect: f64 },

    #[error("map is not a derivation (relative defect {defect:.3e})")]
    NotADerivation { defect: f64 },

    #[error("subspace is not an ideal: {0}")]
    NotAnIdeal(String),

    #[error("subspace is not closed under the bracket (residual {residual:.3e})")]
    NotASubalgebra { residual: f64 },

    #[error("soliton derivation is not normal (‖[S,A]‖ = {defect:.3e})")]
    NonNormal { defect: f64 },

    #[error("tr(S) = {trace:.6e} is not positive; the soliton is flat or trivial")]
    NonPositiveTrace { trace: f64 },

    #[error("flat soliton: an explicit (lambda, derivation) override is required")]
    DegenerateFlat,

    #[error("soliton certificate was not accepted (residual {residual:.3e})")]
    NotAccepted { residual: f64 },

    #[error("expected an extension in {expected} mode, got {got}")]
    ModeMismatch { expected: String, got: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 1 for mathematical failures, 2 for input and usage errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Schema(_)
            | Error::Io(_)
            | Error::Json(_)
            | Error::DimensionMismatch { .. }
            | Error::InvalidParameter(_)
            | Error::ModeMismatch { .. } => 2,
            _ => 1,
        }
    }
}
