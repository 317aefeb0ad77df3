//! Crate-wide error taxonomy: invalid domains, violated preconditions,
//! and solver non-convergence (with the partial state that was reached).

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Geometric or parameter input outside the operation's domain.
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    /// A documented precondition does not hold for the given data.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Iterative solver exhausted its budget.
    #[error("solver did not converge: {0}")]
    NoConvergence(String),

    /// Adaptive quadrature ran out of subdivisions; the partial estimate
    /// and the residual error bound are reported.
    #[error("quadrature budget exhausted: partial estimate {partial:.9e}, error bound {bound:.3e}")]
    QuadBudget { partial: f64, bound: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
