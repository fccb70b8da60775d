use thiserror::Error;

use crate::hypercube::LineTemplate;

pub type Result<T> = std::result::Result<T, Error>;

/// A syntax or content error in a coloring file, located at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid shape k={k} n={n}: {reason}")]
    InvalidShape {
        k: u64,
        n: u64,
        reason: &'static str,
    },

    #[error("coordinate {position} has value {value}, expected 1..={k}")]
    CoordinateOutOfRange { position: usize, value: u64, k: u32 },

    #[error("expected {expected} coordinates, got {got}")]
    WrongDimension { expected: usize, got: usize },

    #[error("point index {index} out of range (cube has {count} points)")]
    IndexOutOfRange { index: u64, count: usize },

    #[error("points must be distinct")]
    IdenticalPoints,

    #[error("symmetry group of order {order} is too large to enumerate")]
    GroupTooLarge { order: u128 },

    #[error("invalid line template: {0}")]
    InvalidTemplate(String),

    #[error("line {0} has an unassigned point")]
    UnassignedOnLine(LineTemplate),

    #[error("operation requires a total coloring ({unassigned} points unassigned)")]
    PartialColoring { unassigned: usize },

    #[error("coloring has {got} entries, shape needs {expected}")]
    WrongLength { expected: usize, got: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("base coloring is not rainbow-free (rainbow line {0})")]
    BaseNotRainbowFree(LineTemplate),

    #[error("line {line} contains {count} points of the singleton set (at most {limit} allowed)")]
    SingletonSetOverloaded {
        line: LineTemplate,
        count: usize,
        limit: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("search produced an invalid witness: {0}")]
    WitnessRejected(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}
