use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected m = {expected}, found m = {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported dimension m = {m}: {reason}")]
    UnsupportedDimension { m: usize, reason: &'static str },

    #[error("grade {grade} out of range for m = {m}")]
    GradeOutOfRange { grade: usize, m: usize },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("polynomial is not homogeneous of degree {expected}")]
    NotHomogeneous { expected: usize },

    #[error(
        "kernel series not converged within {k_max} terms at z = {z}: tail bound {estimate:e} \
         exceeds tolerance {tail_tol:e}"
    )]
    Truncation {
        k_max: usize,
        z: f64,
        estimate: f64,
        tail_tol: f64,
        /// Partial sum through `k_max`, when the failure came from a single evaluation.
        partial: Option<Box<crate::kernel::KernelValue>>,
    },

    #[error("eigen index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("ill-conditioned normalization for {index}: squared norm {norm_sq:e}")]
    IllConditioned { index: String, norm_sq: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("serialization error: {0}")]
    Serde(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}
