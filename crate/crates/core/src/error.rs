use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed system description: {0}")]
    Parse(String),
    #[error("invalid Coxeter matrix: {0}")]
    InvalidMatrix(String),
    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },
    #[error("descent test inconclusive in approximate mode (|value| = {magnitude:e} below tolerance)")]
    InconclusiveDescent { magnitude: f64 },
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("subset {0:?} is not spherical")]
    NotSpherical(Vec<usize>),
    #[error("evaluation at a pole of the rational function")]
    Pole,
    #[error("weight must be positive, got {0}")]
    NonPositiveWeight(String),
    #[error("system is not right-angled")]
    NotRightAngled,
    #[error("nerve is not a flag triangulated sphere of dimension <= 2: {0}")]
    NotSphereNerve(String),
    #[error("slices are incompatible: {0}")]
    SliceMismatch(String),
    #[error("solver did not converge: residual {residual:e} after {iterations} iterations")]
    SolverNonConvergence { residual: f64, iterations: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Whether the error is a numerical or resource failure rather than bad input.
    pub fn is_runtime_failure(&self) -> bool {
        matches!(self, Error::SolverNonConvergence { .. } | Error::ResourceCap(_) | Error::InconclusiveDescent { .. })
    }
}
