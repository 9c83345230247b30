use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the toolkit.
///
/// The CLI maps [`Error::Io`] to exit code 2 and everything else to exit
/// code 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: invalid UTF-8 at byte offset {offset}")]
    InvalidUtf8 { path: String, offset: usize },

    #[error("{path}: malformed CSV at row {row}: {message}")]
    MalformedCsv {
        path: String,
        row: u64,
        message: String,
    },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("contract violation in block {cited_doc_id}: {message}")]
    Contract {
        cited_doc_id: String,
        message: String,
    },

    #[error("transient resolver failure for {key} after {attempts} attempts: {message}")]
    Transient {
        key: String,
        attempts: u32,
        message: String,
    },

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn contract(cited_doc_id: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Contract {
            cited_doc_id: cited_doc_id.into(),
            message: msg.into(),
        }
    }

    /// Process exit code for this error: 2 for I/O, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
