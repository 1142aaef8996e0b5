//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the evaluation harness.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid experiment or operation configuration.
    #[error("config error: {0}")]
    Config(String),

    /// Malformed, inconsistent, or insufficient input data.
    #[error("data error: {0}")]
    Data(String),

    /// Model training or prediction failure.
    #[error("model error: {0}")]
    Model(String),

    /// Explanation generation, import, or validation failure.
    #[error("explanation error: {0}")]
    Explain(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: 1 for configuration problems,
    /// 2 for anything that went wrong with data or downstream work.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
