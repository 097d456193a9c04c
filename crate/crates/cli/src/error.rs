use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Input {
        path: PathBuf,
        source: combitag::Error,
    },

    #[error("{path}: {source}")]
    Model {
        path: PathBuf,
        source: serde_json::Error,
    },

    #[error(transparent)]
    Data(#[from] combitag::Error),
}

impl CliError {
    pub fn config(line: usize, message: impl Into<String>) -> Self {
        CliError::Config {
            line,
            message: message.into(),
        }
    }

    /// 1 for usage and configuration mistakes, 2 for bad or misaligned data.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } => 1,
            CliError::Data(combitag::Error::Config(_)) => 1,
            _ => 2,
        }
    }
}
