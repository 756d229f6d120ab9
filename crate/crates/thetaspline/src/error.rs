use thiserror::Error;

/// Errors shared across the crate.
#[derive(Error, Debug)]
pub enum Error {
    #[error("precision exhausted: no agreement at {max_bits} bits (relative gap {last_gap:.3e})")]
    PrecisionExhausted { max_bits: u32, last_gap: f64 },

    #[error("quadrature did not converge: {panels} panels used, error estimate {err_estimate:.3e}")]
    NonConvergent { panels: usize, err_estimate: f64 },

    #[error("gamma pole at {0}")]
    PoleError(f64),

    #[error("argument outside domain: {0}")]
    DomainError(String),

    #[error("duplicate knot at working precision: {0}")]
    DuplicateKnot(f64),

    #[error("duplicate interpolation node: {0}")]
    DuplicateNode(f64),

    #[error("zero certification failed for {family} index {index}")]
    ZeroFindingFailure { family: String, index: usize },

    #[error("series did not converge within {max_terms} terms (wrong regime?)")]
    SlowConvergence { max_terms: usize },

    #[error("log-scaled integrand overflowed at t = {0}")]
    IntegrandOverflow(f64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
