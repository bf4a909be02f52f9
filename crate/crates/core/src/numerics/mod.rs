//! Numerical building blocks: special functions, quadrature, monotone
//! inversion and a simplex minimizer.

mod minimize;
mod quadrature;
mod roots;
mod special;

pub use minimize::{minimize, minimize_with, MinimizeOptions};
pub use quadrature::{
    integrate, integrate_with, Interval, QuadratureOptions, QuadratureResult, TailMap,
};
pub use roots::{invert_monotone, MAX_DOUBLINGS};
pub use special::{log_gamma, regularized_incomplete_beta};

pub(crate) use special::{beta_inc_split, log_gamma_unchecked};

/// Logistic function `1 / (1 + e^-s)`.
pub(crate) fn logistic(s: f64) -> f64 {
    if s >= 0.0 {
        1.0 / (1.0 + (-s).exp())
    } else {
        let e = s.exp();
        e / (1.0 + e)
    }
}
