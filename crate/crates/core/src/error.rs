use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: String,
        expected: usize,
        found: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { what: String, deviation: f64 },

    #[error("{what} is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { what: String, deviation: f64 },

    #[error("{what} is not an orthogonal projector (max deviation {deviation:.3e})")]
    NotProjector { what: String, deviation: f64 },

    #[error("measurement at {time}: projectors {first:?} and {second:?} are not orthogonal (max deviation {deviation:.3e})")]
    NonOrthogonalProjectors {
        time: String,
        first: String,
        second: String,
        deviation: f64,
    },

    #[error("measurement at {time}: projectors do not sum to the identity (max deviation {deviation:.3e})")]
    IncompleteProjectors { time: String, deviation: f64 },

    #[error("{what} is not normalized (norm {norm:.12})")]
    NotNormalized { what: String, norm: f64 },

    #[error("unknown outcome {label:?} at {time}")]
    UnknownOutcome { time: String, label: String },

    #[error("history index has {found} outcomes, expected {expected}")]
    HistoryLength { expected: usize, found: usize },

    #[error("amplitude is undefined for history {history}: a projector in it has rank > 1")]
    AmplitudeUndefined { history: String },

    #[error("outcome {label:?} at {time} does not factorize across the space partition: {reason}")]
    NotFactorizable {
        time: String,
        label: String,
        reason: String,
    },

    #[error("schedule mismatch: {0}")]
    ScheduleMismatch(String),

    #[error("history probabilities sum to {total:.15}, expected 1")]
    NormalizationFailure { total: f64 },

    #[error("density has a negative eigenvalue {value:.3e}")]
    NegativeEigenvalue { value: f64 },

    #[error("density trace is {trace:.15}, expected 1")]
    TraceMismatch { trace: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {residual:.3e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("{0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of a numerical invariant on computed quantities, as
    /// opposed to malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NormalizationFailure { .. }
                | Error::NegativeEigenvalue { .. }
                | Error::TraceMismatch { .. }
                | Error::NoConvergence { .. }
        )
    }
}
