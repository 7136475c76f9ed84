use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("singular tridiagonal system: vanishing pivot at row {row}")]
    SingularMatrix { row: usize },

    #[error("data variant does not provide {0}")]
    DerivativeUnsupported(&'static str),

    #[error("evaluation outside tabulated range at {0}")]
    OutOfRange(f64),

    #[error("non-finite value produced by {context} at time step {step}")]
    NonFinite { context: &'static str, step: usize },

    #[error("quadrature failed to reach tolerance {tol:e} (estimated error {err:e})")]
    QuadratureFailure { tol: f64, err: f64 },

    #[error("field has too few time levels ({0}) for time differencing")]
    TooFewTimeLevels(usize),

    #[error("interface iteration did not converge after {iters} iterations (last relative update {last:e})")]
    NoConvergence { iters: usize, last: f64 },

    #[error("slope fit needs at least two strictly positive points")]
    InsufficientData,
}

pub type Result<T> = std::result::Result<T, Error>;
