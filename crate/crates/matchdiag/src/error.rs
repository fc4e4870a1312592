//! Crate-wide error type.

use thiserror::Error;

/// Everything that can go wrong while building spaces, mappings, block
/// functions, or the documents derived from them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("a metric space needs at least one point")]
    EmptySpace,
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),
    #[error("point {index} has {got} coordinates, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("point {index} has a non-finite coordinate")]
    InvalidCoordinate { index: usize },
    #[error("invalid distance {value} between points {i} and {j}")]
    InvalidDistance { i: usize, j: usize, value: f64 },
    #[error("distance matrix is not symmetric at ({i}, {j}): {lower} vs {upper}")]
    NotSymmetric {
        i: usize,
        j: usize,
        lower: f64,
        upper: f64,
    },
    #[error("subset is empty")]
    EmptySubset,
    #[error("index {index} out of range for a space with {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("embedding is not isometric at pair ({i}, {j}): {original} vs {embedded}")]
    NotIsometric {
        i: usize,
        j: usize,
        original: f64,
        embedded: f64,
    },
    #[error("delta must be nonnegative, got {0}")]
    NegativeDelta(f64),
    #[error("spaces have {0} and {1} points; sizes must match")]
    SizeMismatch(usize, usize),
    #[error("ambient dimensions differ: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("mapping sends index {index} to {target}, out of range for a codomain with {len} points")]
    MappingOutOfRange {
        index: usize,
        target: usize,
        len: usize,
    },
    #[error("mapping must cover every domain index exactly once: {0}")]
    MappingNotTotal(String),
    #[error("no mapping given: {0}")]
    MappingMissing(String),
    #[error("cannot infer mapping: domain point {index} ({text}) has no exact coordinate match in the codomain")]
    NoCoordinateMatch { index: usize, text: String },
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("deficiency at death value {death} is negative ({value})")]
    NegativeDeficiency { death: f64, value: i64 },
    #[error("block function is not decomposable into ladders: {0}")]
    NotInjectiveDecomposable(String),
    #[error("block function is not a partial matching: {0}")]
    NotAMatching(String),
    #[error("inconsistent barcode parts: {0}")]
    InconsistentParts(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
