use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("joint dimension {dim} exceeds the configured cap {cap}")]
    DimensionOverflow { dim: usize, cap: usize },

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("trace is not one (got {0})")]
    InvalidTrace(f64),

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("non-finite entry")]
    NonFinite,

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("Kraus set violates sub-normalization (max eigenvalue {0})")]
    KrausNotSubnormalized(f64),

    #[error("degenerate branch: probability {0:e}")]
    DegenerateBranch(f64),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("degenerate span: {0}")]
    DegenerateSpan(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("optimizer did not converge (best feasible value {best})")]
    NonConvergence { best: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed state file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
