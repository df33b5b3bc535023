use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),

    #[error("resource budget exceeded: {what} needs {needed}, budget is {budget}")]
    Resource {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    /// An operation that requires a θ-commuting pair was handed one that is not.
    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("operator does not commute with the row-isometry: {0}")]
    NotCommuting(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// Two independent routes to the same answer disagreed.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
