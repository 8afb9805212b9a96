use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Support enumeration would visit more than the configured number of supports.
    #[error("too large: C({d}, {k}) = {count} supports exceeds the guard of {limit}")]
    TooLarge {
        d: usize,
        k: usize,
        count: u128,
        limit: u128,
    },

    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    /// Some direction has `(Ax)^-` identically zero, so the imbalance ratio is infinite.
    #[error("mu is unbounded: direction with zero negative mass found")]
    UnboundedMu,

    #[error("serialization error: {0}")]
    Serialization(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::error::Error::InvalidArgument(format!($($arg)*))
    };
}

pub(crate) use invalid;
