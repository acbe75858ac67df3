use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension {dim} exceeds the supported maximum of {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("bits normalization requires a power-of-two outcome count, got {0}")]
    BitsModeRequiresPowerOfTwo(usize),

    #[error("binary information requires exactly two outcomes, got {0}")]
    NotBinary(usize),

    #[error("information vector has length {norm} > 1 and is not a physical state")]
    UnphysicalVector { norm: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("wrong dimension: expected {expected}, found {found}")]
    WrongDimension { expected: usize, found: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("operator is not a Hermitian projector (deviation {deviation:e})")]
    NotProjector { deviation: f64 },

    #[error("observed outcome has probability {probability:e}, state update undefined")]
    ZeroProbabilityOutcome { probability: f64 },

    #[error("unsupported dimension {dim}: {reason}")]
    UnsupportedDimension { dim: usize, reason: String },

    #[error("rotation axis has zero length, the period is undefined")]
    ZeroField,

    #[error("invalid direction: {0}")]
    InvalidDirection(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
