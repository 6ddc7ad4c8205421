use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] adams_core::Error),

    #[error("assertion failed: {0}")]
    Assertion(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    pub fn io(path: impl Into<String>, err: impl std::fmt::Display) -> Self {
        CliError::Io {
            path: path.into(),
            message: err.to_string(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Core(adams_core::Error::Nonconvergence { .. }) => 3,
            CliError::Core(_) | CliError::Io { .. } => 2,
            CliError::Assertion(_) => 4,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
