use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported macro grid size {0}: expected 1, 7 or 19 sites with 3 sectors each")]
    UnsupportedGridSize(usize),

    #[error("could not place {what} #{index} after {attempts} attempts")]
    PlacementFailure {
        what: &'static str,
        index: usize,
        attempts: usize,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error in {origin}: {message}")]
    Parse { origin: String, message: String },

    #[error("drop {drop}: {source}")]
    Drop {
        drop: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
