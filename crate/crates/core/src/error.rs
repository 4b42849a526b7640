use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("element index {index} out of range for group of order {order}")]
    ElementOutOfRange { index: u64, order: u32 },

    #[error("cannot parse element `{token}`: {reason}")]
    BadElement { token: String, reason: String },

    #[error("{e} does not divide q - 1 = {q_minus_one}")]
    NotADivisor { e: u32, q_minus_one: u32 },

    #[error("class index {i} out of range for order {e}")]
    ClassIndexOutOfRange { i: u32, e: u32 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid digraph: {0}")]
    InvalidDigraph(String),

    #[error("empty set")]
    EmptySet,

    #[error("duplicate element {0} in a set")]
    DuplicateElement(u32),

    #[error("family has {family} sets but digraph has {digraph} vertices")]
    SizeMismatch { family: usize, digraph: usize },

    #[error("sets have unequal sizes {0:?}")]
    NonUniformSizes(Vec<usize>),

    #[error("parameter out of range: {0}")]
    BadParameter(String),

    #[error("construction `{0}` failed its own verification")]
    ConstructionFailed(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
