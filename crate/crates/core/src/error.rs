use thiserror::Error;

/// Errors produced by the operator algebra and the solvers.
///
/// Vertex, row and column indices carried by the variants are zero-based.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("dimension must be positive")]
    EmptyDimension,

    #[error("entry ({row}, {col}) is outside a {dim}x{dim} operator")]
    IndexOutOfRange { row: usize, col: usize, dim: usize },

    #[error("entry ({row}, {col}) given more than once")]
    DuplicateEntry { row: usize, col: usize },

    #[error("non-finite value at position {index}")]
    NonFinite { index: usize },

    #[error("energy {energy} is resonant with level {level} (|E - E_level| = {gap:e})")]
    Resonance {
        level: usize,
        energy: num_complex::Complex64,
        gap: f64,
    },

    #[error("transition graph contains the cycle {cycle:?}; the Born series does not terminate")]
    NotNilpotent { cycle: Vec<usize> },

    #[error("path enumeration on a cyclic graph needs a finite length bound")]
    UnboundedEnumeration,

    #[error("path enumeration exceeded the limit of {limit} paths")]
    PathLimitExceeded { limit: usize },

    #[error("matrix is singular to working precision (pivot {pivot:e} in column {column})")]
    Singular { column: usize, pivot: f64 },

    #[error("expected diamond topology 0->1, 0->2, 1->3, 2->3; found edges {edges:?}")]
    Topology { edges: Vec<(usize, usize)> },

    #[error("invalid argument: {0}")]
    Argument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
