use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Index or exponent arithmetic left the 64-bit range.
    #[error("integer overflow while computing {0}")]
    Overflow(String),

    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A textual value could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// The root finder did not reach the residual tolerance.
    #[error("root finder did not converge for {poly}: {detail}")]
    NonConvergence { poly: String, detail: String },

    /// The argument-principle contour could not be certified.
    #[error("contour failure: {0}")]
    Contour(String),

    /// A property that must hold mathematically was observed to fail.
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    pub(crate) fn overflow(what: impl Into<String>) -> Self {
        Error::Overflow(what.into())
    }

    pub(crate) fn domain(what: impl Into<String>) -> Self {
        Error::Domain(what.into())
    }

    /// Short stable identifier used in machine-readable error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Overflow(_) => "overflow",
            Error::Domain(_) => "domain",
            Error::Parse(_) => "parse",
            Error::NonConvergence { .. } => "non_convergence",
            Error::Contour(_) => "contour",
            Error::InvariantViolation(_) => "invariant_violation",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
