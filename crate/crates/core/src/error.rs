use thiserror::Error;

/// Errors raised by the simulation and reconstruction routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix data length {len} is not a square of dim {dim}")]
    NotSquare { dim: usize, len: usize },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("matrix is singular or ill-conditioned (condition estimate {0:e})")]
    Singular(f64),

    #[error("resonant cascade: internal resolvent is singular (condition estimate {0:e})")]
    ResonantCascade(f64),

    #[error("axis is not a unit vector (norm {0})")]
    NonUnitAxis(f64),

    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("gate `{gate}` has arity {arity} but target is {target}")]
    ArityMismatch {
        gate: String,
        arity: usize,
        target: String,
    },

    #[error("flat design: measurement has no sensitivity to the unknowns (coefficient {0:e})")]
    FlatDesign(f64),

    #[error("plan is rank deficient: rank {rank}, need {needed}")]
    RankDeficient { rank: usize, needed: usize },

    #[error("expected {expected} records, got {found}")]
    RecordMismatch { expected: usize, found: usize },

    #[error("pure-state fit residual {0:e} too large (input not pure or plan insufficient)")]
    NotPure(f64),

    #[error("zero transmission probability")]
    ZeroTransmission,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerical guards (singular inverses, flat designs).
    pub fn is_numerical_guard(&self) -> bool {
        matches!(
            self,
            Error::Singular(_)
                | Error::ResonantCascade(_)
                | Error::FlatDesign(_)
                | Error::RankDeficient { .. }
                | Error::ZeroTransmission
                | Error::NotPure(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
