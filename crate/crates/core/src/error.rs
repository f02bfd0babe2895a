use thiserror::Error;

/// Errors raised by the matrix, enumeration and counting layers.
///
/// Positions in messages are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    Dimension { left: usize, right: usize },

    #[error("side length {0} is not a perfect square")]
    Shape(usize),

    #[error("invalid matrix: {0}")]
    Validation(String),

    #[error("value out of range: {0}")]
    Range(String),

    #[error("family has {found} members, expected {expected}")]
    Arity { expected: usize, found: usize },

    #[error("family members {first} and {second} are not disjoint")]
    NotDisjoint { first: usize, second: usize },

    #[error("n = {n} exceeds the resource guard of {limit}; pass an override to proceed")]
    Guard { n: usize, limit: usize },

    #[error("inexact arithmetic: {0}")]
    Arithmetic(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
