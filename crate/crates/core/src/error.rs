use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("lattice mismatch: `{left}` vs `{right}`")]
    LatticeMismatch { left: String, right: String },

    #[error("map is not injective (rank {rank} < {cols} columns)")]
    NotInjective { rank: usize, cols: usize },

    #[error("map is not surjective onto a free lattice")]
    NotSurjective,

    #[error("operation requires a nonempty polyhedron")]
    EmptyInput,

    #[error("linear form is unbounded below on the polyhedron")]
    UnboundedBelow,

    #[error("linear form is not in the dual of the tail cone")]
    NotInDualCone,

    #[error("guard exceeded: {what} = {value} > {limit}")]
    GuardExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("divisor label sets differ")]
    LabelMismatch,

    #[error("label not present: {0}")]
    LabelAbsent(String),

    #[error("invalid pp-divisor: {0}")]
    InvalidDivisor(String),

    #[error("no degree element: the weights are not homogeneous")]
    NoDegreeElement,

    #[error("consistency check failed: {0}")]
    Inconsistent(String),

    #[error("parse error: {0}")]
    Parse(String),
}
