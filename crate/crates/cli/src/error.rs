use thiserror::Error;

/// CLI failure categories, each mapped to a distinct exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("solver error: {0}")]
    Solver(#[from] hetdd_core::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Solver(_) => 4,
            CliError::Io(_) => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
