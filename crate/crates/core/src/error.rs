use thiserror::Error;

/// Errors raised by the model, solver and measure routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum KitaevError {
    #[error("parameter `{name}` is not finite")]
    NonFinite { name: &'static str },

    #[error("matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("state norm deviates from 1 by {deviation:e}")]
    NotNormalized { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("basis mismatch between operands")]
    BasisMismatch,

    #[error("parameters are not at the required sweet spot: {0}")]
    NotSweetSpot(String),

    #[error("three-site quartic requires uniform parameters")]
    NonUniform,

    #[error("quartic residual is defined per parity sector, not for the full space")]
    FullSectorQuartic,

    #[error("invalid site pair ({0}, {1}); expected one of (1,2), (2,3), (1,3)")]
    InvalidPair(usize, usize),

    #[error("density matrix is not X-shaped (off-pattern magnitude {offending:e})")]
    NotXForm { offending: f64 },

    #[error("density matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("density matrix trace deviates from 1 by {deviation:e}")]
    BadTrace { deviation: f64 },

    #[error("concurrence {0} outside [0, 1]")]
    ConcurrenceOutOfRange(f64),

    #[error("unsupported initial state `{0}` for this chain")]
    UnsupportedInitial(String),

    #[error("unknown measure `{0}`")]
    UnknownMeasure(String),

    #[error("measure `{measure}` is not defined for a {sites}-site chain")]
    MeasureNotApplicable { measure: String, sites: usize },

    #[error("invalid axis `{name}`: {reason}")]
    InvalidAxis { name: String, reason: String },

    #[error("measure `{measure}` = {value} outside its range")]
    OutOfRange { measure: String, value: f64 },

    #[error("worker pool: {0}")]
    Workers(String),
}

impl KitaevError {
    /// True for violations of numerical invariants, as opposed to bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            KitaevError::NotHermitian { .. }
                | KitaevError::NotNormalized { .. }
                | KitaevError::NotPsd { .. }
                | KitaevError::BadTrace { .. }
                | KitaevError::ConcurrenceOutOfRange(_)
                | KitaevError::OutOfRange { .. }
        )
    }
}

pub type Result<T, E = KitaevError> = std::result::Result<T, E>;
