use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unsupported image: {0}")]
    Format(String),

    /// Zero mean squared error: PSNR is unbounded.
    #[error("images are identical, PSNR is infinite")]
    Degenerate,

    #[error("no readable images in {0}")]
    EmptyManifest(PathBuf),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
