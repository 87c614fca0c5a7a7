use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("trace parse error: {0}")]
    TraceParse(String),
    #[error("solver error: {0}")]
    Solver(String),
    #[error("certificate violation: {0}")]
    Violation(String),
}

impl CliError {
    pub fn unwritable(path: &Path, e: std::io::Error) -> Self {
        CliError::Config(format!("cannot write {}: {e}", path.display()))
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Violation(_) => 1,
            CliError::Config(_) | CliError::TraceParse(_) => 2,
            CliError::Solver(_) => 3,
        }
    }
}
