//! Crate-wide error type.

use std::path::PathBuf;
use thiserror::Error;

/// Errors produced anywhere in the clustering pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller violated an operation precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A guarded exhaustive routine was asked to enumerate too large a space.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Solver or run configuration is inconsistent.
    #[error("configuration error: {0}")]
    Config(String),

    /// Price-file ingestion failed.
    #[error("ingestion error: {0}")]
    Ingestion(String),

    /// A numerical routine failed to converge or produced unusable output.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// Filesystem failure, annotated with the path involved.
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A file did not match its documented format.
    #[error("parse error: {0}")]
    Parse(String),

    /// A solver failed while processing one subgraph of a recursive run.
    #[error("solver failed on subgraph {vertices:?}: {source}")]
    Subgraph {
        vertices: Vec<usize>,
        #[source]
        source: Box<Error>,
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
