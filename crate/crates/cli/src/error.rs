use std::io;

use starprod_core::Error as CoreError;

/// Front-end failures, each mapped to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("schema: {0}")]
    Schema(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("io: {0}")]
    Io(#[from] io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    /// A probe or check did not come out as expected.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    /// `1` for failed checks and exhausted step budgets, `2` for everything
    /// the user has to fix in the invocation or inputs.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) | CliError::Core(CoreError::StepLimitExceeded { .. }) => 1,
            CliError::Core(CoreError::NotPositive { .. }) => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
