use std::path::PathBuf;

use thiserror::Error;

/// CLI-level errors. Each category maps to a stable process exit code:
/// contract violations 2, file-format errors 3, I/O errors 4, oracle
/// failures 5.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] spi_solve::Error),

    #[error("{path}:{line}: {msg}")]
    Format {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(spi_solve::Error::OracleFailure(_)) => 5,
            CliError::Core(_) => 2,
            CliError::Format { .. } => 3,
            CliError::Io { .. } => 4,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn format(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        CliError::Format {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }
}
