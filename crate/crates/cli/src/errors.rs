//! Error-to-exit-code policy: bad configuration exits 2, resource and I/O
//! failures exit 3.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Resource(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Resource(_) => 3,
        }
    }
}

impl From<crossquad_core::Error> for CliError {
    fn from(e: crossquad_core::Error) -> Self {
        use crossquad_core::Error as E;
        match e {
            E::Io(_) | E::CoeffTableTooLarge { .. } | E::ExhaustiveCapExceeded { .. }
            | E::StepCapExceeded { .. } => CliError::Resource(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Resource(e.to_string())
    }
}
