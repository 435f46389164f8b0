use thiserror::Error;

/// Errors produced by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Adaptive quadrature ran out of subdivisions before reaching the requested accuracy.
    #[error("quadrature did not converge: achieved error {achieved:.3e}, requested {requested:.3e}")]
    Quadrature { achieved: f64, requested: f64 },

    /// The radial ODE integration or the exterior match failed.
    #[error("scattering solver failed: {0}")]
    Solver(String),

    /// An exponent program has no finite optimum or is degenerate.
    #[error("exponent program: {0}")]
    Program(String),

    /// A least-squares fit could not be performed.
    #[error("ill-conditioned fit: {0}")]
    Fit(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
