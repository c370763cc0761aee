//! Library half of the `lsa` command: argument types, file formats and the
//! command implementations. `main.rs` only parses and maps errors to exit
//! codes.

pub mod commands;
pub mod format;
pub mod pgm;
pub mod suites;

use std::path::Path;

use thiserror::Error;

pub use commands::{run, Cli};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0} bound violation(s) detected")]
    Violations(usize),
}

impl CliError {
    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Input(format!("{}: {err}", path.display()))
    }

    /// 2 input error, 3 budget exceeded, 4 bound violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Violations(_) => 4,
        }
    }
}

impl From<lsa_core::Error> for CliError {
    fn from(err: lsa_core::Error) -> Self {
        match err {
            lsa_core::Error::BudgetExceeded { .. } => CliError::Budget(err.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<lsa_wavelet::WaveletError> for CliError {
    fn from(err: lsa_wavelet::WaveletError) -> Self {
        CliError::Input(err.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        CliError::Input(err.to_string())
    }
}
