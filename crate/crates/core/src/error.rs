use thiserror::Error;

/// Errors surfaced by the library. Arithmetic bugs are not represented here;
/// those trip assertions instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed group spec: bad atom `{atom}`: {reason}")]
    GroupSpec { atom: String, reason: String },

    #[error("coefficient count mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("group {0} is not abelian")]
    NotAbelian(String),

    #[error("factor index {index} out of range for a group with {count} factor(s)")]
    FactorOutOfRange { index: usize, count: usize },

    #[error("group {0} is not a p-group")]
    NotPGroup(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("{0} is not prime")]
    Composite(String),

    #[error("{value} exceeds the deterministic primality range (64-bit)")]
    PrimalityRange { value: String },

    #[error("gcd({a}, {p}) != 1")]
    NotCoprime { a: String, p: u64 },

    #[error("unsupported group {0}")]
    Unsupported(String),

    #[error("box too large: {evals} evaluations exceed the ceiling of {ceiling}")]
    BoxTooLarge { evals: String, ceiling: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("oracle mismatch at {point:?}: fast path {fast}, determinant {exact}")]
    OracleMismatch {
        point: Vec<i64>,
        fast: String,
        exact: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
