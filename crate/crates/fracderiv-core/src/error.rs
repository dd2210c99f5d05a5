use alloc::string::String;
use core::fmt;

/// Unified error type for every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    Domain(String),
    /// A result could not be produced to the requested accuracy within the
    /// evaluation budget.
    Accuracy(String),
    /// An ODE integration failed; `t` is where it stopped.
    Integration { t: f64, reason: String },
    /// An iterative refinement hit its cap; `last_norm` is the final
    /// successive-difference norm.
    NonConvergence { last_norm: f64, reason: String },
    /// The problem is outside what the requested method can represent.
    Unsupported(String),
    /// A linear system arising from the problem is singular or nearly so.
    IllPosed(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Accuracy(msg) => write!(f, "accuracy error: {msg}"),
            Error::Integration { t, reason } => {
                write!(f, "integration failed at t = {t}: {reason}")
            }
            Error::NonConvergence { last_norm, reason } => {
                write!(f, "did not converge (last norm {last_norm:e}): {reason}")
            }
            Error::Unsupported(msg) => write!(f, "unsupported problem: {msg}"),
            Error::IllPosed(msg) => write!(f, "ill-posed problem: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
