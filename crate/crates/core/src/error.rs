use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,

    #[error("constant polynomial has no discriminant")]
    ConstantPolynomial,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("iteration budget exceeded: need {required} iterations, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("{what} did not converge within {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },

    #[error("factorization incomplete for degree {degree} (complete profiles only up to degree {limit})")]
    IncompleteFactorization { degree: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
