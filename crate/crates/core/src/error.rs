use thiserror::Error;

/// Errors surfaced by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HurwitzError {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("degree mismatch: |lambda| = {lambda} but |mu| = {mu}")]
    DegreeMismatch { lambda: u32, mu: u32 },

    #[error("degree must be at least 1")]
    EmptyDegree,

    #[error("degree {0} exceeds the supported maximum of {max}", max = crate::symgroup::MAX_DEGREE)]
    DegreeTooLarge(u32),

    #[error("branch point count r = {0} is negative")]
    NegativeBranchCount(i64),

    #[error("no inner vertices: r = 0")]
    NoBranchPoints,

    #[error("s = {s} outside [0, {r}]")]
    SplitOutOfRange { s: i64, r: usize },

    #[error("invalid splitting: {0}")]
    InvalidSplitting(String),

    #[error("search budget of {0} node expansions exceeded")]
    BudgetExceeded(u64),

    #[error("invalid tropical cover: {0}")]
    InvalidCover(String),

    #[error("vertex x_{0} matches no sign rule")]
    UnclassifiableVertex(usize),

    #[error("real multiplicity {0} is not an integer")]
    NonIntegral(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no colouring induces the requested splitting")]
    ColouringNotFound,

    #[error("{0} colourings induce the requested splitting")]
    ColouringNotUnique(usize),

    #[error("witness construction failed: {0}")]
    Construction(String),
}

pub type Result<T> = std::result::Result<T, HurwitzError>;
