use thiserror::Error;

/// Errors raised by the combinatorial and algebraic operations of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element is not invertible")]
    NotInvertible,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("arity mismatch: expected {expected} arguments, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("degree {needed} is required but the series is only known through order {order}")]
    DegreeOverflow { needed: usize, order: usize },
    #[error("the empty tree has no decomposition")]
    EmptyTree,
    #[error("operand of a merge must be nonempty")]
    EmptyOperand,
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("partition is crossing: {0}")]
    Crossing(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("series is not in the required class: {0}")]
    ClassViolation(String),
    #[error("object does not belong to family {0}")]
    FamilyMismatch(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("composition requires a series with vanishing constant term")]
    NonzeroConstantTerm,
    #[error("independent computations disagree: {0}")]
    Inconsistent(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
