use std::path::PathBuf;

use thiserror::Error;

/// Exit status for bad arguments, configuration or input files.
pub const EXIT_CONFIG: i32 = 2;
/// Exit status for failures while an experiment runs or writes its output.
pub const EXIT_RUNTIME: i32 = 1;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{}:{line}: {message}", path.display())]
    Parse { path: PathBuf, line: usize, message: String },
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("refusing to write an empty table")]
    EmptyTable,
    #[error("{0}")]
    Runtime(String),
    #[error(transparent)]
    Core(#[from] qprune_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl HarnessError {
    pub fn config(msg: impl Into<String>) -> Self {
        HarnessError::Config(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) | HarnessError::Parse { .. } | HarnessError::Read { .. } => {
                EXIT_CONFIG
            }
            _ => EXIT_RUNTIME,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
