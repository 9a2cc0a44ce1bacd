use thiserror::Error;

/// Command failures, split by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or invalid input; exit code 1.
    #[error("{0}")]
    Input(String),
    /// The numerics broke down; exit code 2.
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Numeric(_) => 2,
        }
    }
}

impl From<loccgate::Error> for CliError {
    fn from(e: loccgate::Error) -> Self {
        if e.is_numeric() {
            CliError::Numeric(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}
