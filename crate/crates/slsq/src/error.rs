use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("graded space must have positive dimension")]
    ZeroDimension,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not homogeneous of parity {0}")]
    NotHomogeneous(String),
    #[error("parity of operand is not declared")]
    UndeclaredParity,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("missing generator `{0}`")]
    MissingGenerator(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("unknown option `{0}`")]
    UnknownOption(String),
    #[error("degenerate point: {0}")]
    Degenerate(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("singular input: {0}")]
    Singular(String),
    #[error("q = {0} is a root of unity or too close to one")]
    RootOfUnity(String),
    #[error("nullspace has dimension {dim}, expected 1")]
    Nullspace { dim: usize },
    #[error("branch tie: {0}")]
    Tie(String),
    #[error("branch inconsistency: {0}")]
    BranchInconsistency(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
