use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("mixed field specifications: {0} and {1}")]
    MixedFields(String, String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degree {requested} exceeds the dimension bound {bound}")]
    DimensionBound { requested: usize, bound: usize },
    #[error("unknown simplex: {0}")]
    UnknownSimplex(String),
    #[error("simplicial identity violated: {0}")]
    Violation(String),
    #[error("input is not reduced: {0}")]
    NotReduced(String),
    #[error("map is not a monomorphism: {0}")]
    NotMonomorphism(String),
    #[error("group of order {order} exceeds the bound {bound}")]
    GroupTooLarge { order: usize, bound: usize },
    #[error("diagram is not cellular: {0}")]
    NotCellular(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
