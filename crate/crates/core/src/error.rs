use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("enumeration refused: {estimate} assignments exceed cap {cap}")]
    CapExceeded { estimate: u64, cap: u64 },
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
