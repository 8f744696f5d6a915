use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The evaluation point lies on a declared branch cut.
    #[error("point z = {z} lies on the branch cut of T(., p = {p})")]
    BranchCut { z: Complex64, p: Complex64 },

    /// T(z, p) is singular to working precision.
    #[error("T(z, p) is singular to working precision at z = {z}, p = {p}")]
    Singular { z: Complex64, p: Complex64 },

    /// A quadrature node coincides (numerically) with an eigenvalue.
    #[error(
        "T is singular at quadrature node z = {z}, p = {p}; \
         an eigenvalue lies on the contour, change the node count or the contour"
    )]
    SingularNode { z: Complex64, p: Complex64 },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// The number of eigenvalues inside the domain is not constant over the parameter samples.
    #[error("eigenvalue count is not constant over the parameter samples: ranks {ranks:?}")]
    AssumptionViolation { ranks: Vec<usize> },

    #[error("realization failed: {0}")]
    Realization(String),

    #[error("model evaluation failed: {0}")]
    Evaluation(String),

    #[error("invalid solution: {0}")]
    InvalidSolution(String),

    #[error("dense linear algebra kernel failed: {0}")]
    Lapack(String),

    #[error("unsupported model format version {found} (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("malformed model file: {0}")]
    Malformed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Lapack(e.to_string())
    }
}
