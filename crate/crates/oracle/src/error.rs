use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle cap exceeded in {0}")]
    Cap(String),
    #[error("unsupported oracle input: {0}")]
    Unsupported(String),
    #[error("oracle disagreement: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, OracleError>;
