use thiserror::Error;

/// Errors raised by the library. Decision procedures themselves never fail;
/// every variant here is a usage, validation or parse problem.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("strategy index {index} out of range for a game with {size} strategies")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid mixed strategy: {0}")]
    InvalidStrategy(String),
    #[error("invalid game: {0}")]
    InvalidGame(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("certificate rejected: {0}")]
    Certificate(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
