use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by every layer of the crate.
///
/// The variants are grouped by what went wrong rather than by module, so the
/// CLI can map them onto exit codes without knowing where they came from.
#[derive(Debug, Error)]
pub enum Error {
    #[error("resource limit: {0}")]
    Resource(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unsupported term: {0}")]
    UnsupportedTerm(String),

    #[error("training failed: {0}")]
    Training(String),

    #[error("invalid data: {0}")]
    Data(String),

    #[error("degenerate data: {0}")]
    Degenerate(String),

    #[error("dataset generation failed: {0}")]
    Generation(String),

    #[error("split failed: {0}")]
    Split(String),

    #[error("{path}: row {row}: {message}")]
    Parse {
        path: PathBuf,
        row: usize,
        message: String,
    },

    #[error("unsupported format version {found} (expected major {expected})")]
    FormatVersion { found: String, expected: u32 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
