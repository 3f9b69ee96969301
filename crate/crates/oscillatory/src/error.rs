use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OscError {
    #[error("quadrature did not converge: {panels} panels, error estimate {error:.3e} above target {target:.3e}")]
    QuadratureNotConverged {
        panels: usize,
        error: f64,
        target: f64,
    },
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("root not bracketed: {sign_changes} sign changes found on the scan grid")]
    RootNotBracketed { sign_changes: usize },
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(String),
    #[error("table format: {0}")]
    TableFormat(String),
}

pub type Result<T> = std::result::Result<T, OscError>;
