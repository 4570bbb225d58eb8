use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by sample validation, depth evaluation and simulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("curve {curve} has {found} values but the grid has {expected} points")]
    MismatchedLength {
        curve: usize,
        expected: usize,
        found: usize,
    },

    #[error("curve {curve} has a non-finite value at grid point {point}")]
    NonFinite { curve: usize, point: usize },

    #[error("at least 2 curves are required, got {0}")]
    TooFewCurves(usize),

    #[error("invalid grid: {0}")]
    BadGrid(String),

    #[error("duplicate curve id {0:?}")]
    DuplicateId(String),

    #[error("invalid band delimiters: {0}")]
    BadIndices(String),

    #[error("band size J={j} must satisfy 2 <= J <= {n}")]
    BadJ { j: usize, n: usize },

    #[error("unknown depth method {0:?}")]
    UnknownMethod(String),

    #[error("cannot split {n} curves into {k} parts of at least 2 curves each")]
    PartTooSmall { n: usize, k: usize },

    #[error("partition assigns {found} curves but the sample has {expected}")]
    PartitionMismatch { expected: usize, found: usize },

    #[error("depth vector has {found} values but the sample has {expected} curves")]
    DepthLengthMismatch { expected: usize, found: usize },

    #[error("estimate has {found} values but the grid has {expected} points")]
    GridMismatch { expected: usize, found: usize },

    #[error("trimming proportion {0} is outside [0, 1)")]
    BadAlpha(f64),

    #[error("unknown contamination model {0}")]
    BadModelId(u32),

    #[error("invalid parameter: {0}")]
    BadParameter(String),

    #[error("covariance matrix is not positive definite even with jitter {jitter:e}")]
    NotFactorizable { jitter: f64 },
}

impl Error {
    /// True for failures of the numerical linear algebra rather than of the input data.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::NotFactorizable { .. })
    }
}
