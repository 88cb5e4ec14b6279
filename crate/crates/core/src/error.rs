use thiserror::Error;

/// Errors raised by the numeric and exact routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {value} outside the domain of {what}: {reason}")]
    Domain {
        what: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("{what} is singular at {value}")]
    Singular { what: &'static str, value: f64 },

    #[error("{what} did not converge within {iterations} iterations")]
    IterationLimit {
        what: &'static str,
        iterations: usize,
    },

    #[error("polynomial has degree {found}, expected {expected}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("prefix holds {found} polynomials, expected {expected}")]
    IncompletePrefix { expected: usize, found: usize },

    #[error("non-integer coefficient {coeff} at x^{index}")]
    NonIntegerCoefficient { index: usize, coeff: String },

    #[error("malformed golden record on line {line}: {reason}")]
    Golden { line: usize, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(what: &'static str, value: f64, reason: &'static str) -> Error {
    Error::Domain {
        what,
        value,
        reason,
    }
}
