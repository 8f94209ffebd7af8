use thiserror::Error;

/// Errors raised by the numeric, sampling and verification entry points.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} requires a size of at least {min}, got {got}")]
    SizeTooSmall {
        what: &'static str,
        min: usize,
        got: usize,
    },
    #[error("{what} must lie in 0..{bound}, got {got}")]
    OutOfRange {
        what: &'static str,
        got: u64,
        bound: u64,
    },
    #[error("cannot draw below a bound of zero")]
    ZeroBound,
    #[error("ratio table covers sizes up to {max_n}, size {requested} was requested")]
    TableTooSmall { max_n: usize, requested: usize },
    #[error("size {got} exceeds the enumeration cap of {cap}")]
    CapExceeded { got: usize, cap: usize },
    #[error(transparent)]
    Vector(#[from] VectorError),
}

/// Structural defects found while decoding a flat tree vector.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VectorError {
    #[error("vector length {0} is not a valid tree encoding length")]
    BadLength(usize),
    #[error("label {label} at index {index} is out of range or repeated")]
    NotPermutation { index: usize, label: u32 },
    #[error("root label {0} is even, so the root is a leaf")]
    RootIsLeaf(u32),
    #[error("decoding from the root reached {reached} of {expected} nodes")]
    Disconnected { reached: usize, expected: usize },
    #[error("internal node {0} has a leaf left child and an internal right child")]
    ForbiddenConfiguration(u32),
    #[error("vector encodes size {got}, expected {expected}")]
    SizeMismatch { got: usize, expected: usize },
    #[error("cannot parse vector entry {index}: {token:?}")]
    BadToken { index: usize, token: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
