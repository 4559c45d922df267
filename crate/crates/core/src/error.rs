use thiserror::Error;

/// Errors produced by the verification toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("inconsistent point counts: N1={n1}, N2={n2}, q={q}")]
    InconsistentCounts { n1: u64, n2: u64, q: u64 },

    #[error("enumeration budget exceeded: f={f} > budget {budget}; raise the budget")]
    Budget { f: u64, budget: u64 },

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("cache error: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
