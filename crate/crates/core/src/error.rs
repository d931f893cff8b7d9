use thiserror::Error;

/// Errors raised by the numerical core.
///
/// File and CLI failures live in [`crate::io::IoError`]; everything here is a
/// pure function of the inputs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite input to {0}")]
    NonFinite(&'static str),

    #[error("the zero vector has no projection onto the sphere")]
    ZeroVector,

    #[error("points are antipodal: the connecting geodesic is not unique")]
    Antipodal,

    #[error("iterate is antipodal to data point {index}")]
    CutLocus { index: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("value {value} is at or above the link upper bound (π²−4)/4 = {bound}")]
    Saturated { value: f64, bound: f64 },

    #[error(
        "Fréchet mean did not converge after {iterations} iterations (gradient norm {gradient_norm:e})"
    )]
    NotConverged {
        iterations: usize,
        gradient_norm: f64,
    },

    #[error("series tail bound {tail_bound:e} not certified within k_max = {k_max}")]
    SeriesTail { k_max: usize, tail_bound: f64 },

    #[error("covariance matrix is singular or not positive definite")]
    Singular,
}

pub type Result<T> = std::result::Result<T, Error>;
