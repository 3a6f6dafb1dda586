use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("ground set mismatch: expected m = {expected}, got m = {found}")]
    GroundMismatch { expected: usize, found: usize },

    #[error("complex is not ({m},{k})-balanced")]
    NotBalanced { m: usize, k: usize },

    #[error("cell estimate {estimate} exceeds the cap of {cap}")]
    CapExceeded { estimate: u64, cap: u64 },

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("no connectivity certificate: {0}")]
    NoCertificate(String),

    #[error("not a chain complex: {0}")]
    NotChainComplex(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
