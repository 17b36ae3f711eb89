use thiserror::Error;

/// Exit code contract.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },

    #[error("{0}")]
    Document(String),

    #[error(transparent)]
    Core(#[from] pricecomp::Error),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Json { .. } => "json",
            CliError::Document(_) => "document",
            CliError::Core(pricecomp::Error::BudgetExceeded { .. }) => "budget",
            CliError::Core(_) => "model",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(pricecomp::Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            _ => EXIT_INPUT,
        }
    }
}
