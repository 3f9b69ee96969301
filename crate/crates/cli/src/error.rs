use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("numerical non-convergence: {0}")]
    NonConvergence(String),
    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

pub const EXIT_FAILED_VERDICT: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NONCONVERGENCE: u8 = 3;
pub const EXIT_IO: u8 = 4;

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }

    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::NonConvergence(_) => EXIT_NONCONVERGENCE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<oscillatory::OscError> for CliError {
    fn from(e: oscillatory::OscError) -> Self {
        use oscillatory::OscError::*;
        match e {
            QuadratureNotConverged { .. } | RootNotBracketed { .. } => {
                CliError::NonConvergence(e.to_string())
            }
            DomainError(_) | InvalidSpec(_) => CliError::Usage(e.to_string()),
            TableFormat(_) => CliError::Io(e.to_string()),
        }
    }
}

impl From<spectral::SpectralError> for CliError {
    fn from(e: spectral::SpectralError) -> Self {
        use spectral::SpectralError::*;
        match e {
            Oscillatory(o) => o.into(),
            Domain(m) => CliError::Usage(m),
            Format(m) => CliError::Io(m),
            Io(e) => CliError::Io(e.to_string()),
        }
    }
}

impl From<dyadic::DyadicError> for CliError {
    fn from(e: dyadic::DyadicError) -> Self {
        use dyadic::DyadicError::*;
        match e {
            Oscillatory(o) => o.into(),
            InsufficientData { .. } | Domain(_) => CliError::Usage(e.to_string()),
            Io(e) => CliError::Io(e.to_string()),
            Json(e) => CliError::Io(e.to_string()),
        }
    }
}

impl From<sharpness::SharpnessError> for CliError {
    fn from(e: sharpness::SharpnessError) -> Self {
        use sharpness::SharpnessError::*;
        match e {
            Oscillatory(o) => o.into(),
            Dyadic(d) => d.into(),
            Precondition(m) => CliError::Usage(m),
            Io(e) => CliError::Io(e.to_string()),
            Json(e) => CliError::Io(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
