use thiserror::Error;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the domain where the defining integral or series exists.
    #[error("domain error: {0}")]
    Domain(String),
    /// Gamma function evaluated at a non-positive integer.
    #[error("pole of the gamma function at {0}")]
    Pole(f64),
    /// Adaptive quadrature ran out of subdivisions before meeting tolerance.
    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e} after {evals} evaluations")]
    NonConvergence { estimate: f64, error: f64, evals: usize },
    /// Series terms kept growing.
    #[error("series diverges: terms grew for {0} consecutive indices")]
    Divergence(usize),
    /// Series did not meet the truncation test within the term cap.
    #[error("series did not converge within {0} terms")]
    MaxTermsExceeded(usize),
    /// A hypergeometric parameter set outside the convergence region.
    #[error("inadmissible series: {0}")]
    Inadmissible(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
