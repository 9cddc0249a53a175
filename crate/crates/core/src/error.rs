use thiserror::Error;

/// Errors produced by the statistics kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A multiplicative statistic was asked for a value that is not strictly positive.
    #[error(
        "value at index {index} is {value}; multiplicative statistics need strictly positive data"
    )]
    NonPositive { index: usize, value: f64 },

    #[error("empty sample")]
    Empty,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// All regressor values are equal, so the slope is undetermined.
    #[error("degenerate design: explanatory variable is constant")]
    DegenerateDesign,

    /// Adaptive quadrature ran out of subdivisions.
    #[error("quadrature did not converge: estimate {estimate} with error bound {abs_error}")]
    Quadrature { estimate: f64, abs_error: f64 },

    #[error("no sign change on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
