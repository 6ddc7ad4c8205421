use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("quadrature did not converge: estimate {estimate:e}, error estimate {error:e} after {subdivisions} subdivisions")]
    Nonconvergence {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("energy {energy} exceeds 1")]
    EnergyViolation { energy: f64 },

    #[error("monotonicity error: {0}")]
    Monotonicity(String),

    #[error("degenerate trial: {0}")]
    DegenerateTrial(String),

    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),

    #[error("empty input")]
    EmptyInput,

    #[error("profile error: {0}")]
    Profile(String),

    #[error("boundary condition violated: {0}")]
    BoundaryCondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
