use std::path::PathBuf;

use thiserror::Error;

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// Exit status for usage, validation and IO errors.
pub const EXIT_ERROR: i32 = 1;
/// Exit status for configurations with a multiplier off the unit circle.
pub const EXIT_UNSTABLE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("invalid configuration {path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error(transparent)]
    Core(#[from] floquet_pacs_core::Error),
    #[error("serialization failed: {0}")]
    Serialize(#[from] serde_json::Error),
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(floquet_pacs_core::Error::Unstable { .. }) => EXIT_UNSTABLE,
            _ => EXIT_ERROR,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
