use thiserror::Error;

/// Errors raised by the library. The CLI maps [`Error::is_input_error`]
/// variants to exit code 2.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A family parameter lies outside its admissible domain. The message
    /// names the violated inequality.
    #[error("domain violation: {0}")]
    Domain(String),

    #[error("undefined series: denominator parameter {param} vanishes at k={k}")]
    UndefinedSeries { param: f64, k: usize },

    #[error("singularity at s={s}: {what}")]
    Singularity { s: f64, what: String },

    #[error("non-positive weight ratio {ratio} at s={s}")]
    WeightPositivity { s: f64, ratio: f64 },

    #[error("weight tail did not fall below tolerance within {0} points")]
    Truncation(usize),

    #[error("expected {expected} zeros, found {found} sign changes ({detail})")]
    ZeroCount {
        expected: usize,
        found: usize,
        detail: String,
    },

    #[error("ill-conditioned system: {0}")]
    IllConditioned(String),

    #[error("sweep discontinuity: {0}")]
    SweepDiscontinuity(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),
}

impl Error {
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::InvalidInput(_) | Error::Domain(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
