use oscillatory::OscError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DyadicError {
    #[error(transparent)]
    Oscillatory(#[from] OscError),
    #[error("insufficient data: {points} usable points, at least {needed} needed")]
    InsufficientData { points: usize, needed: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, DyadicError>;
