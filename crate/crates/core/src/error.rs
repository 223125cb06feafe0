use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unsupported center dimension {0} (expected 1..=8)")]
    UnsupportedDimension(usize),
    #[error("invalid multiplicities for m = {m}: plus = {plus}, minus = {minus}")]
    InvalidMultiplicity { m: usize, plus: usize, minus: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degenerate plane: the two vectors are linearly dependent")]
    DegeneratePlane,
    #[error("zero vector where a nonzero one is required: {0}")]
    ZeroVector(&'static str),
    #[error("excluded case: {0}")]
    ExcludedCase(&'static str),
    #[error("inconsistent dimensions {0:?} match no admissible case")]
    NoCaseMatch((usize, usize, usize)),
    #[error("degenerate system: {0}")]
    DegenerateSystem(&'static str),
    #[error("curvature sign mismatch between tangent vectors")]
    SignMismatch,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no common zero found on the scan grid")]
    NoCommonZero,
}
