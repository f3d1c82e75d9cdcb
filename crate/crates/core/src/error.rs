use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid heading interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("turning radius must be positive and finite, got {0}")]
    InvalidRadius(f64),

    #[error("partition of target {target} does not tile [0, 2π]: {reason}")]
    InvalidPartition { target: usize, reason: String },

    #[error("{what} has {got} entries but the cap is {cap}; use a heuristic or relaxed strategy")]
    CapExceeded { what: &'static str, got: usize, cap: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("failed to parse {what}: {reason}")]
    Parse { what: String, reason: String },

    #[error("i/o error on {path}: {source}")]
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

    /// True for failures of the filesystem rather than of the input data.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}
