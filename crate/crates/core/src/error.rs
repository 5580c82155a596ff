use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Jacobi exponents (alpha={alpha}, beta={beta}): both must be finite and > -1")]
    InvalidExponents { alpha: f64, beta: f64 },

    #[error("argument t={0} is outside the open interval (-1, 1)")]
    OutsideDomain(f64),

    #[error("degree {degree} exceeds the recurrence cap {cap}")]
    DegreeExceedsCap { degree: usize, cap: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "tridiagonal eigensolver did not converge for eigenvalue {index} within {sweeps} sweeps"
    )]
    NoConvergence { index: usize, sweeps: usize },

    #[error("integrand returned non-finite value {value} at node {index} (t={node})")]
    NonFiniteIntegrand { index: usize, node: f64, value: f64 },

    #[error("singular endpoint system")]
    SingularSystem,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("reference accuracy {accuracy:e} is too coarse for observed errors (largest {largest_error:e})")]
    ReferenceTooCoarse { accuracy: f64, largest_error: f64 },

    #[error("insufficient usable points for exponent fit: need {needed}, have {have}")]
    InsufficientPoints { needed: usize, have: usize },
}
