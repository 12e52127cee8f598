use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("unknown stance label {0:?} (expected FAVOR, AGAINST, NONE or ?)")]
    UnknownStance(String),

    #[error("mixed topics in one dataset: {first:?} and {other:?}")]
    MixedTopics { first: String, other: String },

    #[error("duplicate comment id {0:?}")]
    DuplicateId(String),

    #[error("empty comment id")]
    EmptyId,

    #[error("comment {0:?} has empty text")]
    EmptyText(String),

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("comment {0:?} has no gold label")]
    Unlabeled(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("all training documents are empty")]
    EmptyVocabulary,

    #[error("unsupported format version {found:?} (expected {expected:?})")]
    Version { expected: String, found: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(line: usize, message: impl Into<String>) -> Self {
        Error::Format {
            line,
            message: message.into(),
        }
    }
}
