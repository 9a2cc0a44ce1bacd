use thiserror::Error;

/// Everything that can go wrong inside the toolkit.
///
/// Variants split into two families: malformed input (bad dimensions, bad
/// probabilities, non-orthonormal sets) and numeric breakdown (decomposition
/// failure, a theorem-guaranteed check that did not hold). The CLI maps the
/// former to exit code 1 and the latter to exit code 2, see
/// [`Error::is_numeric`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("local dimensions must be nonempty and each at least 1, got {0:?}")]
    InvalidDims(Vec<usize>),

    #[error("total dimension {total} exceeds the maximum {max}")]
    DimensionOverflow { total: u128, max: usize },

    #[error("expected {expected} amplitudes, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("amplitude {index} is not finite")]
    NonFinite { index: usize },

    #[error("state norm {norm} deviates from 1 by more than {tol}")]
    NotNormalized { norm: f64, tol: f64 },

    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimsMismatch { left: Vec<usize>, right: Vec<usize> },

    #[error("invalid cut: {0}")]
    InvalidCut(String),

    #[error("states {i} and {j} violate orthonormality by {violation:e} (tolerance {tol:e})")]
    NotOrthonormal {
        i: usize,
        j: usize,
        violation: f64,
        tol: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("incomplete basis: expected {expected} vectors, got {got}")]
    IncompleteBasis { expected: usize, got: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    /// True for failures of the numerics rather than of the input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Numeric(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
