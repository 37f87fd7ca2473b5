use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix is not invertible at tolerance (sigma_min = {sigma_min:e})")]
    NotInvertible { sigma_min: f64 },

    #[error("family is not a frame (lambda_min = {lambda_min:e})")]
    NotAFrame { lambda_min: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("need at least {required} vectors, got {found}")]
    TooFewVectors { required: usize, found: usize },

    #[error("index {index} out of range for family of {len} vectors")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("tight frames are excluded from the removal criterion (relative gap {gap:e})")]
    TightFrameExcluded { gap: f64 },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("base orbit is not a frame (lambda_min = {lambda_min:e})")]
    BaseNotAFrame { lambda_min: f64 },

    #[error("non-finite entry at position {0}")]
    NonFinite(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0} did not converge")]
    NoConvergence(&'static str),
}
