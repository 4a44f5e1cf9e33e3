//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by corpus ingestion, model construction, and analysis.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// A line of an input file could not be parsed.
    #[error("{path}:{line}: {message}")]
    Malformed {
        path: String,
        line: usize,
        message: String,
    },

    #[error("duplicate judgment id {0:?}")]
    DuplicateId(String),

    #[error("invalid judgment {id:?}: {message}")]
    InvalidJudgment { id: String, message: String },

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("empty vocabulary: no token survived the document-frequency filter")]
    EmptyVocabulary,

    #[error("document-frequency bounds must satisfy 0 <= min < max <= 1, got ({min}, {max})")]
    InvalidDfBounds { min: f64, max: f64 },

    #[error("vector dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("cannot compare a sparse vector with a dense vector")]
    VectorKindMismatch,

    #[error("unknown node id {0:?}")]
    UnknownNode(String),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("empty sample: {0}")]
    EmptySample(String),

    #[error("no valid queries to aggregate")]
    NoValidQueries,

    #[error("index metadata mismatch: {0}")]
    MetadataMismatch(String),
}

impl Error {
    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub(crate) fn malformed(path: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Malformed {
            path: path.to_string(),
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
