use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows} rows, {cols} columns")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// The right-hand side is not contained in the column space.
    #[error("right-hand side is not in the range of the matrix")]
    Range,

    #[error("moment data of degree {have} is insufficient, degree {need} required")]
    InsufficientDegree { need: usize, have: usize },

    #[error("invalid moment data: {0}")]
    InvalidMoments(String),

    #[error("weight family violates commutativity at k = ({0}, {1})")]
    NonCommutative(usize, usize),

    #[error("positivity violated: {0}")]
    Positivity(String),

    #[error("weights are not strictly increasing: {0}")]
    Order(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    /// A definitive negative: no subnormal completion exists.
    #[error("no completion: {0}")]
    NoCompletion(String),

    #[error("moment matrix M(1) is invertible, a singular one is required")]
    NotSingular,

    #[error("completion for m = {0} is not supported")]
    UnsupportedDegree(usize),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported input shape: {0}")]
    Unsupported(String),

    /// An internal consistency check tripped.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
