use thiserror::Error;

/// Errors raised by models, metrics and solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("problem is infeasible: {0}")]
    Infeasible(String),
    #[error("search budget exceeded: {0}")]
    Budget(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("config line {line}: key `{key}`: {message}")]
    Config {
        line: usize,
        key: String,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
