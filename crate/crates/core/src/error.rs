use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter or input value falls outside its admissible range.
    #[error("invalid {field}: {reason}")]
    Invalid { field: String, reason: String },

    /// The requested time lies at or beyond the finite-time singularity.
    #[error("tau = {tau} is at or past the crisis time {crisis_time}")]
    PastCrisis { tau: f64, crisis_time: f64 },

    /// A function evaluation produced a non-finite value where none was expected.
    #[error("numerical domain error at tau = {tau}: {detail}")]
    NumericalDomain { tau: f64, detail: String },

    #[error("no sign change on bracket [{lo}, {hi}]")]
    Bracketing { lo: f64, hi: f64 },

    #[error("degenerate least-squares fit: {0}")]
    DegenerateFit(String),

    #[error("recurrence K_n = K_(n-1) / (1 - sigma) diverges for sigma = {sigma} >= 1")]
    DivergentRecurrence { sigma: f64 },

    #[error("insufficient observations: {0}")]
    InsufficientObservation(String),

    #[error("line {line}, key `{key}`: {message}")]
    Parse {
        line: usize,
        key: String,
        message: String,
    },
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
