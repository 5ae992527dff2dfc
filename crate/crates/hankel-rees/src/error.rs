//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ambient size must be at least 4, got {0}")]
    AmbientTooSmall(u32),

    #[error("({lo},{hi}) is not a close cut of [1,{n}]")]
    BadLabel { lo: u32, hi: u32, n: u32 },

    #[error("invalid chain: {0}")]
    BadChain(String),

    #[error("chain does not fit its label: {0}")]
    BadLabeledChain(String),

    #[error("ambient mismatch: n={0} vs n={1}")]
    AmbientMismatch(u32, u32),

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("matrix row count out of range: t={t} not in 1..={max}")]
    RowCountOutOfRange { t: usize, max: usize },

    #[error("Laplace expansion needs at least two rows, got {0}")]
    LaplaceTooSmall(usize),

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("no valid chain bipartition of {0}")]
    NoBipartition(String),

    #[error("straightening did not converge: {0}")]
    NonConvergence(String),

    #[error("resource budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
