use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

/// A malformed curve CSV, with 1-based row and column where known.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{path}: row {row}{}: {message}", col.map(|c| format!(", column {c}")).unwrap_or_default())]
pub struct ParseError {
    pub path: String,
    pub row: usize,
    pub col: Option<usize>,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("config {path}:{line}: {message}")]
    Config {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Depth(#[from] banddepth::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 for usage and configuration, 2 for invalid data, 3 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        use banddepth::Error as E;
        match self {
            CliError::Usage(_) | CliError::Config { .. } | CliError::Io { .. } => 1,
            CliError::Parse(_) => 2,
            CliError::Depth(e) => match e {
                E::NotFactorizable { .. } => 3,
                E::MismatchedLength { .. }
                | E::NonFinite { .. }
                | E::TooFewCurves(_)
                | E::BadGrid(_)
                | E::DuplicateId(_)
                | E::GridMismatch { .. }
                | E::DepthLengthMismatch { .. }
                | E::PartitionMismatch { .. } => 2,
                _ => 1,
            },
        }
    }
}
