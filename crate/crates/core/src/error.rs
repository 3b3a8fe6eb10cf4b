use thiserror::Error;

/// Everything that can go wrong while building states or evaluating patterns.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("path count must be at least {min}, got {n}")]
    TooFewPaths { n: usize, min: usize },

    #[error("amplitudes are not normalized: sum of |c|^2 = {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("overlap matrix diagonal entry {index} is {value}, expected 1")]
    NonUnitDiagonal { index: usize, value: f64 },

    #[error("overlap entry ({row}, {col}) has modulus {modulus} > 1")]
    OverlapTooLarge { row: usize, col: usize, modulus: f64 },

    #[error("matrix is not positive semidefinite: minimum eigenvalue {min_eigenvalue:e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("beta = {beta} lies outside [0, 1]")]
    BetaOutOfRange { beta: f64 },

    #[error("pi-phase path index {index} out of range for {n} paths")]
    PiPathOutOfRange { index: usize, n: usize },

    #[error("{samples} samples requested, at least {min} required")]
    TooFewSamples { samples: usize, min: usize },

    #[error("time must be non-negative, got {t}")]
    NegativeTime { t: f64 },

    #[error("decoherence time of a path with itself is infinite (j = k = {index})")]
    SamePath { index: usize },

    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("{name} = {value} is invalid")]
    InvalidValue { name: &'static str, value: f64 },

    #[error("Fraunhofer condition violated: eps*ell/(lambda*L) = {ratio} >= {limit}")]
    FraunhoferViolated { ratio: f64, limit: f64 },

    #[error("negative intensity {value:e} at abscissa {at}")]
    NegativeIntensity { value: f64, at: f64 },

    #[error("grid must be strictly increasing")]
    GridNotIncreasing,

    #[error("reference intensity must be positive, got {value}")]
    NonPositiveReference { value: f64 },

    #[error("peak-ratio protocol is invalid when a path carries a constrained pi phase")]
    PhaseConstrained,
}

pub type Result<T> = core::result::Result<T, Error>;
