use thiserror::Error;

/// Failure modes of the computation pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Argument outside the domain of the requested function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The saddle-point method was requested where its validity guard fails.
    #[error("saddle guard violated: {0}")]
    Guard(String),

    /// A logarithm argument landed on its branch cut.
    #[error("branch error: {0}")]
    Branch(String),

    /// An iteration or quadrature refinement did not reach its tolerance.
    #[error("no convergence: {0}")]
    NonConvergence(String),

    /// The carried precision cannot determine the requested digits.
    #[error("insufficient precision: {0}")]
    Precision(String),

    /// A value overflowed the exponent range of the arithmetic.
    #[error("range error: {0}")]
    Range(String),

    /// Malformed textual input; `pos` is a 0-based byte offset.
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    /// True for errors caused by the inputs (as opposed to numerical failure).
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Domain(_) | Error::Guard(_) | Error::Branch(_) | Error::Parse { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
