use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed attachment: {0}")]
    MalformedAttachment(String),
    #[error("unknown identifier: {0}")]
    UnknownId(String),
    #[error("invalid target: {0}")]
    InvalidTarget(String),
    #[error("invalid complex: {}", .0.join("; "))]
    InvalidComplex(Vec<String>),
    #[error("complex has cells of dimension {max_dim}, but the variety has dimension {n}")]
    DimensionMismatch { max_dim: usize, n: usize },
    #[error("fan is not smooth: {}", .0.join("; "))]
    NotSmooth(Vec<String>),
    #[error("inconsistent geometry: {0}")]
    InconsistentGeometry(String),
    #[error("unknown cone {0:?}")]
    UnknownCone(Vec<usize>),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
