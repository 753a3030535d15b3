use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("orbital rows are not orthonormal (max deviation {deviation:.3e})")]
    NotOrthonormal { deviation: f64 },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("projector is not idempotent (max deviation {deviation:.3e})")]
    NotIdempotent { deviation: f64 },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("eigenvalue {value} lies outside [0, 1] beyond roundoff")]
    SpectrumOutOfRange { value: f64 },

    #[error("occupation {value} at index {index} is not a valid probability")]
    InvalidOccupation { index: usize, value: f64 },

    #[error("{what} = {size} exceeds the limit {max}")]
    TooLarge {
        what: &'static str,
        size: usize,
        max: usize,
    },

    #[error("cumulant order {0} is outside 1..=12")]
    OrderOutOfRange(usize),

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("truncation at kmax = {kmax} leaves d_kmax = {tail:.3e} above {epsilon:.1e}")]
    TailNotConverged {
        kmax: usize,
        tail: f64,
        epsilon: f64,
    },

    #[error("mode {k} has weight {weight:.3e} inside the disc; profile undefined")]
    ModeAbsent { k: usize, weight: f64 },

    #[error("density operator invalid: {0}")]
    InvalidDensity(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
