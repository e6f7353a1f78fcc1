use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A word-producing operation would exceed the materialization cap.
    #[error("word of length {predicted} exceeds the materialization cap of {cap} letters")]
    SizeLimit { predicted: BigUint, cap: u64 },

    #[error("factor index needs about {needed} bytes, budget is {budget} bytes")]
    MemoryBudget { needed: u64, budget: u64 },

    #[error("parameters are not available at level {level} (family defines {available} levels)")]
    LevelUnavailable { level: usize, available: usize },

    #[error("family structure violated at level {level}: {detail}")]
    Structure { level: usize, detail: String },

    #[error("hypotheses not validated at level {level}: {detail}")]
    Unvalidated { level: usize, detail: String },

    #[error("factor length {n} is outside the indexed range (max {max})")]
    OutOfRange { n: usize, max: usize },

    #[error("word is short (contains no occurrence of 10)")]
    NotLong,

    #[error("word does not decompose over the substitution images: {0}")]
    NotDecomposable(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Resource exhaustion (cap or memory budget), as opposed to bad input.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::SizeLimit { .. } | Error::MemoryBudget { .. })
    }
}
