use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parameter(String),
    #[error("identity suite failed")]
    IdentityFailure,
    #[error(transparent)]
    Core(#[from] hlmoments::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad config file: {0}")]
    Config(#[from] serde_json::Error),
}

impl CliError {
    /// 0 success, 1 identity failure, 2 parameter error, 3 I/O error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::IdentityFailure => 1,
            CliError::Parameter(_) | CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Core(e) => match e {
                hlmoments::Error::Io(_) | hlmoments::Error::CorruptCache { .. } => 3,
                _ => 2,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
