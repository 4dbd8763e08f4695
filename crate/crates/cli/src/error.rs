use thiserror::Error;

/// Exit code 1: unreadable or malformed input, or a failed write.
/// Exit code 2: invalid parameters.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            _ => 1,
        }
    }
}

impl From<cks_core::Error> for CliError {
    fn from(e: cks_core::Error) -> Self {
        use cks_core::Error as E;
        match e {
            E::Parse { .. } | E::EmptyGraph => CliError::Input(e.to_string()),
            E::Io(io) => CliError::Io(io),
            other => CliError::Invalid(other.to_string()),
        }
    }
}
