use thiserror::Error;

/// Errors raised by the numerical routines and the verification pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "quadrature did not converge: value {value:e}, error estimate {error:e} after {evaluations} evaluations"
    )]
    QuadratureNonConvergence {
        value: f64,
        error: f64,
        evaluations: usize,
    },

    #[error("could not bracket target {target} after {doublings} doublings")]
    Bracket { target: f64, doublings: u32 },

    #[error("minimizer did not converge after {iterations} iterations (best objective {best:e})")]
    MinimizeNonConvergence { iterations: usize, best: f64 },

    #[error("moment of order {order} is infinite on the {side} side")]
    MomentNotFinite { order: u32, side: &'static str },

    #[error("degenerate conditioning: F(x) = {probability:e} is too close to 0 or 1")]
    DegenerateConditioning { probability: f64 },

    #[error("invalid ranks: {0}")]
    Rank(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("expanded and simplified forms disagree by {gap:e} at x = {x}")]
    RouteMismatch { x: f64, gap: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
