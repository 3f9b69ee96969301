use thiserror::Error;

#[derive(Debug, Error)]
pub enum SharpnessError {
    #[error(transparent)]
    Oscillatory(#[from] oscillatory::OscError),
    #[error(transparent)]
    Dyadic(#[from] dyadic::DyadicError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, SharpnessError>;
