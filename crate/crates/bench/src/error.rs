use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),

    /// The requested size/method combination cannot run on this build.
    #[error("capability error: {0}")]
    Capability(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] copq_core::Error),

    #[error(transparent)]
    Sim(#[from] copq_qsim::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit status for the command line.
    pub fn exit_code(&self) -> i32 {
        if self.is_capability() {
            2
        } else {
            1
        }
    }

    pub fn is_capability(&self) -> bool {
        matches!(
            self,
            Error::Capability(_)
                | Error::Core(copq_core::Error::SizeLimit { .. })
                | Error::Sim(copq_qsim::Error::SizeLimit { .. })
        )
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
