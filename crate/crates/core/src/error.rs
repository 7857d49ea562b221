use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{value} has a prime factor larger than {limit}")]
    OutsideBasis { value: u64, limit: u64 },

    #[error("polytope is not full-dimensional (affine rank {rank} in dimension {dim})")]
    NotFullDimensional { rank: usize, dim: usize },

    #[error("insufficient data: need at least {needed} values, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("duplicate interpolation argument {0}")]
    DuplicateArgument(i64),

    #[error("negative coordinate in a set required to be nonnegative")]
    NegativeCoordinate,

    #[error("guard exceeded: {what} is {size}, limit {limit}")]
    GuardExceeded {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("interval comparison still inconclusive at {bits} bits")]
    PrecisionExhausted { bits: u32 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
