//! Crate-wide error type.
//!
//! Errors fall into two classes that callers (in particular the CLI) treat
//! differently: problems with the *input* (asking for something outside the
//! domain of an operation) and violations of an *invariant* the computation
//! was supposed to maintain (a bound that fails, a loss of precision that
//! makes the result untrustworthy).

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// How an error should be classified by front ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The request itself was malformed or outside the operation's domain.
    InputDomain,
    /// The computation ran but violated a stated invariant or lost precision.
    InvariantViolation,
}

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the operation's domain (wrong sign, wrong length,
    /// window too small for a decay claim, and so on).
    #[error("domain error: {0}")]
    Domain(String),

    /// Input that fails to be a diffeomorphism where one is required.
    #[error("not a diffeomorphism: {0}")]
    NotADiffeo(String),

    /// Jet operations on incompatible degrees or base points.
    #[error("jet mismatch: {0}")]
    JetMismatch(String),

    /// Reversion of a jet whose linear coefficient vanishes.
    #[error("singular germ: {0}")]
    SingularGerm(String),

    /// Two grid functions that must share a grid do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A matrix too close to singular for the requested bound.
    #[error("condition error: {0}")]
    IllConditioned(String),

    /// A stated invariant failed during the computation.
    #[error("invariant failure: {0}")]
    Invariant(String),

    /// The result would be dominated by floating-point noise.
    #[error("precision loss: {0}")]
    Precision(String),

    /// A root bracket or iteration failed to converge.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Domain(_)
            | Error::NotADiffeo(_)
            | Error::JetMismatch(_)
            | Error::SingularGerm(_)
            | Error::GridMismatch(_)
            | Error::IllConditioned(_) => ErrorClass::InputDomain,
            Error::Invariant(_) | Error::Precision(_) | Error::Numerical(_) => {
                ErrorClass::InvariantViolation
            }
        }
    }
}
