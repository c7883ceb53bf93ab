use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Hilbert space: {0}")]
    InvalidSpace(String),

    #[error("only local dimension 2 is supported, got {0}")]
    UnsupportedLocalDim(usize),

    #[error("Pauli string has {got} sites but the space has {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid Pauli label {0:?}")]
    InvalidPauliLabel(String),

    #[error("matrix is {rows}x{cols}, expected {dim}x{dim}")]
    DimensionMismatch { rows: usize, cols: usize, dim: usize },

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("not a density operator: {0}")]
    NotDensity(String),

    #[error("operands act on different spaces")]
    SpaceMismatch,

    #[error("invalid site selection: {0}")]
    InvalidSites(String),

    #[error("tensor product of an empty list")]
    EmptyTensor,

    #[error("symmetry spec has no generators or discrete elements; use the trivial group explicitly")]
    EmptySymmetry,

    #[error("discrete elements generate more than {limit} group elements")]
    GroupTooLarge { limit: usize },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("zero eigenvalue ({eigenvalue:.3e}): the tensor-generator reduction does not apply")]
    ZeroEigenvalue { eigenvalue: f64 },

    #[error("state is not an eigenvector (residual {residual:.3e})")]
    NotEigenvector { residual: f64 },

    #[error("invalid correlation value for {label}: {reason}")]
    InvalidCorrelation { label: String, reason: String },

    #[error("missing correlation values for: {}", .0.join(" "))]
    MissingCorrelations(Vec<String>),

    #[error("trace must be positive, got {0:.3e}")]
    NonPositiveTrace(f64),

    #[error("amplitudes not normalized: |alpha|^2 + |beta|^2 = {0}")]
    NotNormalized(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
