use thiserror::Error;

/// Failures surfaced by the command-line front end, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("data: {0}")]
    Data(String),
    #[error("numerical: {0}")]
    Numerical(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) | CliError::Io(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl From<sparsepath::Error> for CliError {
    fn from(e: sparsepath::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Data(e.to_string())
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
