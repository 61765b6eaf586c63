use thiserror::Error;

/// Errors produced by the evaluators in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("{func}: {reason}")]
    Domain { func: &'static str, reason: String },

    /// An iterative solver hit its iteration cap.
    #[error("{method} did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        method: &'static str,
        iterations: usize,
        residual: f64,
    },

    /// Adaptive quadrature ran out of panels before reaching its tolerance.
    #[error("quadrature did not converge: estimated error {estimate:e} after {panels} panels")]
    Quadrature { estimate: f64, panels: usize },

    /// A second-moment spectrum and parameter spectrum do not belong together.
    #[error("inconsistent (a, b) pair: {0}")]
    Inconsistent(String),

    /// The requested closure method does not apply to the given orientation state.
    #[error("closure method `{method}` not applicable: {reason}")]
    MethodMismatch { method: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, reason: impl Into<String>) -> Error {
    Error::Domain {
        func,
        reason: reason.into(),
    }
}
