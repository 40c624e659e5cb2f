use thiserror::Error;

use crate::angle::ExprError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// Amplitude reached a basis state whose sideband partner lies above the cutoff.
    #[error(
        "truncation leak: amplitude {amplitude:.3e} on basis index {index} \
         whose partner exceeds cutoff {cutoff}{}",
        pulse.map(|p| format!(" (pulse {p})")).unwrap_or_default()
    )]
    TruncationLeak {
        index: usize,
        amplitude: f64,
        cutoff: usize,
        pulse: Option<usize>,
    },

    #[error("invalid expression: {0}")]
    Expr(#[from] ExprError),

    #[error("schedule document: field '{field}': {message}")]
    Format { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
