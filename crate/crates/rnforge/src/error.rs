use thiserror::Error;

#[derive(Debug, Error)]
pub enum RnError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("data error: {0}")]
    Data(String),
    #[error("malformed certificate: {0}")]
    Format(String),
    #[error("unknown target: {0}")]
    UnknownTarget(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, RnError>;
