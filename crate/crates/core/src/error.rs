use thiserror::Error;

/// Errors raised by the linear algebra kernel, the objective contract,
/// the solvers and the certificate layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },

    #[error("matrix is not symmetric (relative asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotSpd { pivot: usize, value: f64 },

    #[error("invalid block partition: {0}")]
    InvalidPartition(String),

    #[error("block {block} has no exact block solver")]
    NoBlockSolver { block: usize },

    #[error("block {block} has a non-smooth term without a prox operator")]
    NoProx { block: usize },

    #[error("optimum oracle is not available for this objective")]
    NoOptimum,

    #[error("block {block} is constrained; the set-structure precondition fails")]
    ConstrainedBlock { block: usize },

    #[error("no positive root for the step coefficient equation")]
    NoPositiveRoot,

    #[error("solver requires a smooth unconstrained objective (block {block} has a non-zero term)")]
    NonSmoothUnsupported { block: usize },

    #[error("solver requires a known Lipschitz constant")]
    MissingL,

    #[error("missing constants: {0}")]
    MissingConstants(String),

    #[error("trace too short: need at least {needed} usable points, found {found}")]
    TooShort { needed: usize, found: usize },

    #[error("bad dimension: {0}")]
    BadDimension(String),

    #[error("bad shape: {0}")]
    BadShape(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
