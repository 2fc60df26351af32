use thiserror::Error;

/// Errors raised by the numerical routines and the CLI front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported Bessel order {0}")]
    UnsupportedOrder(f64),

    #[error("singular point: {0}")]
    Singularity(String),

    #[error("divergent integral: {0}")]
    Divergence(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("insufficient data: need at least {needed} points, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
