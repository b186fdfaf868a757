use thiserror::Error;

/// Errors raised by graph construction, ingestion, and the model routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: malformed token {token:?}")]
    Parse { line: usize, token: String },

    #[error("line {line}: expected two node ids, found {found}")]
    Arity { line: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph has {n} nodes; brute-force enumeration is limited to {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("maximal clique count exceeded the cap of {cap}")]
    CliqueCap { cap: usize },

    #[error("node count mismatch: {left} vs {right}")]
    NodeCountMismatch { left: usize, right: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
