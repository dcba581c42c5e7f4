use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AppError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] hawkinar_core::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed input: {0}")]
    Input(String),
}

impl AppError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        AppError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for invalid configuration, 3 for supercritical models, 4 for IO.
    pub fn exit_code(&self) -> u8 {
        match self {
            AppError::Model(e) if e.is_supercritical() => 3,
            AppError::Config(_) | AppError::Model(_) => 2,
            AppError::Io { .. } | AppError::Input(_) => 4,
        }
    }
}

impl From<csv::Error> for AppError {
    fn from(e: csv::Error) -> Self {
        AppError::Input(e.to_string())
    }
}
