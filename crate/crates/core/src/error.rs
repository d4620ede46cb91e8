use thiserror::Error;

/// Errors raised by the simulator kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian: |H[{row},{col}] - conj(H[{col},{row}])| = {deviation:e}")]
    NonHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("length {0} is not a power of two (or is below 2)")]
    NotPowerOfTwo(usize),

    #[error("state is not normalized: norm^2 = {0}")]
    NotNormalized(f64),

    #[error("invalid qubit subset {keep:?} for {n} qubits")]
    BadSubset { keep: Vec<usize>, n: usize },

    #[error("operation needs a two-qubit state, got {0} qubits")]
    WrongSize(usize),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("normalized time {0} is outside [0, 1]")]
    OutOfRange(f64),

    #[error("marked index {marked} out of range for {n} qubits")]
    MarkedOutOfRange { marked: usize, n: usize },

    #[error("initial state has zero overlap with the marked state")]
    ZeroOverlap,

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("spectral trace is empty")]
    EmptyTrace,

    #[error("spectral gap {gap:e} at s = {s} is below the resolvable threshold")]
    GapTooSmall { s: f64, gap: f64 },

    #[error("norm drift {0:e} exceeds the propagation contract")]
    StepTooCoarse(f64),

    #[error("eigensolver failed to converge")]
    NoConvergence,
}

pub type Result<T> = std::result::Result<T, Error>;
