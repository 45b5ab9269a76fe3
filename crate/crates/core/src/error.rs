use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("invalid path-loss parameters: {0}")]
    InvalidParams(String),

    #[error("uniform variate {0} outside [0, 1]")]
    UniformOutOfRange(f64),

    #[error("distance must be positive, got {0}")]
    NonPositiveDistance(f64),

    #[error("quadrature did not converge on [{lo}, {hi}]: estimated error {error:e} > tolerance {tol:e} after {intervals} intervals")]
    QuadratureNonConvergence {
        lo: f64,
        hi: f64,
        error: f64,
        tol: f64,
        intervals: usize,
    },

    #[error("closed-form density bracket evaluated to {bracket:e} at l = {l} dB")]
    NegativeDensity { l: f64, bracket: f64 },

    #[error("empty sample")]
    EmptySample,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid layout: {0}")]
    Layout(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
