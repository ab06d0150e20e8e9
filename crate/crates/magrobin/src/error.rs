use thiserror::Error;

#[derive(Debug, Error)]
pub enum AppError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] magrobin_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("budget exceeded: {0}")]
    Budget(String),
}

impl AppError {
    /// Short machine-readable tag for error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            AppError::Usage(_) => "usage",
            AppError::Config(_) => "config",
            AppError::Numerical(_) => "numerical",
            AppError::Io(_) => "io",
            AppError::Json(_) => "json",
            AppError::Budget(_) => "budget",
        }
    }
}

pub type AppResult<T> = Result<T, AppError>;
