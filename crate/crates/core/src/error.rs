use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// A timestamp cell did not match `YYYY-MM-DD HH:MM:SS`.
    #[error("row {row}: malformed timestamp {value:?}")]
    Timestamp { row: usize, value: String },

    /// The same event or object was described twice with different content.
    #[error("row {row}: {message}")]
    Consistency { row: usize, message: String },

    /// A row or header violates the columnar layout.
    #[error("row {row}: {message}")]
    Format { row: usize, message: String },

    #[error("unknown object {0:?}")]
    UnknownObject(String),

    #[error("unknown event {0:?}")]
    UnknownEvent(String),

    #[error("unknown class {class:?}; known classes: {}", known.join(", "))]
    UnknownClass { class: String, known: Vec<String> },

    /// A numeric argument or parameter fell outside its domain.
    #[error("{0}")]
    Domain(String),

    #[error("invalid model dump: {0}")]
    InvalidDump(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
