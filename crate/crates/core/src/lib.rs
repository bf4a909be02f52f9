//! Order-statistic regression characterizations of Student's t
//! distribution and the Q-family of quantile functions.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: log-gamma, regularized incomplete beta, adaptive
//!   quadrature over unbounded intervals, monotone inversion and a
//!   Nelder-Mead minimizer.
//! * [`distributions`]: Student's t (location-scale), the standardized
//!   density `Z_nu`, the Q-family, a few control distributions, sampling
//!   and quantile least-squares fitting.
//! * [`order_stats`]: conditional moments of order statistics given
//!   `X_{k:n} = x`, both through truncated moments and through the explicit
//!   conditional densities.
//! * [`characterization`]: residuals of the regression identities and the
//!   auxiliary differential relations.
//! * [`simulation`]: binned Monte Carlo estimates of the same regressions.

pub mod characterization;
pub mod distributions;
mod error;
pub mod numerics;
pub mod order_stats;
pub mod simulation;

pub use error::{Error, Result};
