use thiserror::Error;

/// Every failure the library can report.
///
/// The variants group into three families that the command-line front end
/// maps onto distinct exit codes: malformed input, requests outside the
/// proved hypotheses, and breaches of a property the mathematics guarantees.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("unsupported pair: {0}")]
    UnsupportedPair(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("unsupported study: {0}")]
    UnsupportedStudy(String),

    #[error("divergent series: exponent s = {exponent} must exceed 1")]
    DivergentSeries { exponent: f64 },

    #[error("series bracket did not close to rel_tol {rel_tol} within {terms} terms")]
    NotConverged { rel_tol: f64, terms: usize },

    #[error("truncation too small: placed {placed} of {needed} entries within length {truncation}")]
    TruncationTooSmall {
        placed: usize,
        needed: usize,
        truncation: usize,
    },

    #[error("invariant breach: {0}")]
    InvariantBreach(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn hypothesis(msg: impl Into<String>) -> Self {
        Error::HypothesisViolation(msg.into())
    }

    /// True for errors caused by the caller's input rather than by the
    /// mathematics or the implementation.
    pub fn is_invalid_input(&self) -> bool {
        matches!(self, Error::InvalidArgument(_))
    }

    /// True for breaches of a guaranteed property (always a bug).
    pub fn is_invariant_breach(&self) -> bool {
        matches!(self, Error::InvariantBreach(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
