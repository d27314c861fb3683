use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("specification error: {0}")]
    Spec(String),
    #[error("degenerate basis: {0}")]
    Degenerate(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("variable count mismatch: expected {expected}, got {got}")]
    VarMismatch { expected: usize, got: usize },
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("symbolic size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
