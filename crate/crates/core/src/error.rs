use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid graph: {0}")]
    Graph(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("series error: {0}")]
    Series(String),
    #[error("interpolation failed: {0}")]
    Interpolation(String),
    #[error("inexact division: {0}")]
    Division(String),
    #[error("unsupported decoration: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
