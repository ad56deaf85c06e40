use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by every module in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("rejected input: {0}")]
    InvalidInput(String),

    #[error("rejected parameter: {0}")]
    InvalidParameter(String),

    #[error("insufficient data: need {needed}, have {available}")]
    InsufficientData { needed: usize, available: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("zero gap: best and second-best arm means are equal")]
    ZeroGap,

    #[error("malformed checkpoint: {0}")]
    Checkpoint(String),

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("training aborted at episode {episode}: {reason}")]
    Aborted { episode: usize, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
