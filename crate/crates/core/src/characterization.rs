//! Residuals of the order-statistic regression identities.
//!
//! Each residual is "left side minus right side" of an identity evaluated
//! at a conditioning value `x`. It vanishes for members of the
//! characterized family and not otherwise, so grids of residuals over the
//! support double as membership tests and as negative controls.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{DistributionModel, StandardizedT};
use crate::error::{invalid, Error, Result};
use crate::order_stats::{avg_cond_moment, truncated_moment, OrderStatContext, Side};

/// Maximum disagreement tolerated between the expanded and simplified
/// second-moment forms.
pub const ROUTE_TOL: f64 = 1e-9;

/// Default grid: 41 probability levels from `1e-4` to `1 - 1e-4`.
pub const GRID_POINTS: usize = 41;
pub const GRID_LEVEL_MIN: f64 = 1e-4;

/// Residuals of one identity over a grid of conditioning values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub x_grid: Vec<f64>,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub delta: Vec<f64>,
    pub max_abs_delta: f64,
    pub tol: f64,
    pub passed: bool,
    /// `delta / (1 + x^2)`, reported for the second-moment identity only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalized_delta: Option<Vec<f64>>,
}

impl ResidualReport {
    /// Builds a report from `(lhs, rhs)` pairs; `passed` iff every
    /// `|lhs - rhs| <= tol`. A NaN residual fails.
    pub fn from_sides(x_grid: Vec<f64>, sides: Vec<(f64, f64)>, tol: f64) -> Self {
        let (lhs, rhs): (Vec<f64>, Vec<f64>) = sides.into_iter().unzip();
        let delta: Vec<f64> = lhs.iter().zip(&rhs).map(|(l, r)| l - r).collect();
        let max_abs_delta = delta
            .iter()
            .map(|d| if d.is_nan() { f64::INFINITY } else { d.abs() })
            .fold(0.0, f64::max);
        Self {
            x_grid,
            lhs,
            rhs,
            delta,
            max_abs_delta,
            tol,
            passed: max_abs_delta <= tol,
            normalized_delta: None,
        }
    }

    fn with_normalized(mut self) -> Self {
        self.normalized_delta = Some(
            self.x_grid
                .iter()
                .zip(&self.delta)
                .map(|(x, d)| d / (1.0 + x * x))
                .collect(),
        );
        self
    }
}

/// `points` equally spaced probability levels on `[level_min, 1 - level_min]`
/// mapped through the quantile function.
pub fn quantile_grid(dist: &dyn DistributionModel, points: usize, level_min: f64) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(invalid("points", format!("a grid needs at least 2 points, got {points}")));
    }
    if !(level_min > 0.0 && level_min < 0.5) {
        return Err(invalid("level_min", format!("must lie in (0, 0.5), got {level_min}")));
    }
    let span = 1.0 - 2.0 * level_min;
    (0..points)
        .map(|i| dist.quantile(level_min + span * i as f64 / (points - 1) as f64))
        .collect()
}

/// The default 41-point grid.
pub fn default_grid(dist: &dyn DistributionModel) -> Result<Vec<f64>> {
    quantile_grid(dist, GRID_POINTS, GRID_LEVEL_MIN)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda < 1.0 {
        Ok(())
    } else {
        Err(invalid("lambda", format!("must lie in (0, 1), got {lambda}")))
    }
}

fn check_nu(nu: u32) -> Result<()> {
    if nu >= 3 {
        Ok(())
    } else {
        Err(invalid("nu", format!("must be an integer >= 3, got {nu}")))
    }
}

/// Both sides of the first-moment identity:
/// `(lambda (x - m-), (1 - lambda)(m+ - x))`.
pub fn theorem1_sides(dist: &dyn DistributionModel, lambda: f64, ctx: &OrderStatContext, x: f64) -> Result<(f64, f64)> {
    check_lambda(lambda)?;
    ctx.check_interior()?;
    let ctx = ctx.with_power(1);
    let below = avg_cond_moment(dist, &ctx, x, Side::Below)?;
    let above = avg_cond_moment(dist, &ctx, x, Side::Above)?;
    Ok((lambda * (x - below), (1.0 - lambda) * (above - x)))
}

/// `lambda (x - m-(x)) - (1 - lambda)(m+(x) - x)`, where `m-` and `m+` are
/// the average conditional means of the observations below and above
/// `X_{k:n} = x`. Zero for all `x` exactly for the Q-family with this
/// `lambda`; at `lambda = 1/2` it compares the average deviations on both
/// sides of `X_{k:n}`.
pub fn theorem1_residual(dist: &dyn DistributionModel, lambda: f64, ctx: &OrderStatContext, x: f64) -> Result<f64> {
    let (lhs, rhs) = theorem1_sides(dist, lambda, ctx, x)?;
    Ok(lhs - rhs)
}

/// Ingredients of the second-moment identity at one conditioning value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Terms {
    pub x: f64,
    pub m1_below: f64,
    pub m1_above: f64,
    pub m2_below: f64,
    pub m2_above: f64,
}

impl Theorem2Terms {
    /// Moments taken about `center`: `x - center`, `m1 - center`,
    /// `m2 - 2 center m1 + center^2`.
    pub fn centered(&self, center: f64) -> Self {
        let m2 = |m2: f64, m1: f64| m2 - 2.0 * center * m1 + center * center;
        Self {
            x: self.x - center,
            m1_below: self.m1_below - center,
            m1_above: self.m1_above - center,
            m2_below: m2(self.m2_below, self.m1_below),
            m2_above: m2(self.m2_above, self.m1_above),
        }
    }

    /// `((nu - 1) x (m1+ - m1-), (nu - 2)(m2+ - m2-))`.
    pub fn sides(&self, nu: u32) -> (f64, f64) {
        let nu = nu as f64;
        (
            (nu - 1.0) * self.x * (self.m1_above - self.m1_below),
            (nu - 2.0) * (self.m2_above - self.m2_below),
        )
    }

    pub fn simplified(&self, nu: u32) -> f64 {
        let (lhs, rhs) = self.sides(nu);
        lhs - rhs
    }

    /// The quadratic form `((nu-1)x/2)^2 - (nu-1)(nu-2) x m1 + (nu-2)^2 m2`
    /// evaluated on each side; their difference is `(nu - 2)` times
    /// [`Theorem2Terms::simplified`].
    pub fn expanded(&self, nu: u32) -> (f64, f64) {
        let nu = nu as f64;
        let half = ((nu - 1.0) * self.x / 2.0).powi(2);
        let cross = (nu - 1.0) * (nu - 2.0) * self.x;
        let sq = (nu - 2.0) * (nu - 2.0);
        (
            half - cross * self.m1_below + sq * self.m2_below,
            sq * self.m2_above - cross * self.m1_above + half,
        )
    }

    /// `|expanded / (nu - 2) - simplified|`.
    pub fn route_gap(&self, nu: u32) -> f64 {
        let (below, above) = self.expanded(nu);
        ((below - above) / (nu as f64 - 2.0) - self.simplified(nu)).abs()
    }
}

pub fn theorem2_terms(dist: &dyn DistributionModel, ctx: &OrderStatContext, x: f64) -> Result<Theorem2Terms> {
    ctx.check_interior()?;
    let first = ctx.with_power(1);
    let second = ctx.with_power(2);
    Ok(Theorem2Terms {
        x,
        m1_below: avg_cond_moment(dist, &first, x, Side::Below)?,
        m1_above: avg_cond_moment(dist, &first, x, Side::Above)?,
        m2_below: avg_cond_moment(dist, &second, x, Side::Below)?,
        m2_above: avg_cond_moment(dist, &second, x, Side::Above)?,
    })
}

fn checked_sides(terms: &Theorem2Terms, nu: u32) -> Result<(f64, f64)> {
    let gap = terms.route_gap(nu);
    if !(gap <= ROUTE_TOL) {
        return Err(Error::RouteMismatch { x: terms.x, gap });
    }
    Ok(terms.sides(nu))
}

/// `(nu - 1) x [m1+ - m1-] - (nu - 2)[m2+ - m2-]` with `m_r` the average
/// conditional moments of order `r`; zero for all `x` exactly for the
/// unit-variance t density with `nu` degrees of freedom (up to scale).
/// The expanded quadratic form is computed alongside and must agree within
/// [`ROUTE_TOL`].
pub fn theorem2_residual(dist: &dyn DistributionModel, nu: u32, ctx: &OrderStatContext, x: f64) -> Result<f64> {
    theorem2_residual_about(dist, nu, ctx, x, 0.0)
}

/// [`theorem2_residual`] with all moments taken about `center`. The
/// identity is scale invariant but not shift invariant, so a located
/// distribution is checked about its location.
pub fn theorem2_residual_about(
    dist: &dyn DistributionModel,
    nu: u32,
    ctx: &OrderStatContext,
    x: f64,
    center: f64,
) -> Result<f64> {
    let (lhs, rhs) = theorem2_sides(dist, nu, ctx, x, center)?;
    Ok(lhs - rhs)
}

fn theorem2_sides(dist: &dyn DistributionModel, nu: u32, ctx: &OrderStatContext, x: f64, center: f64) -> Result<(f64, f64)> {
    check_nu(nu)?;
    let terms = theorem2_terms(dist, ctx, x)?;
    let terms = if center == 0.0 { terms } else { terms.centered(center) };
    checked_sides(&terms, nu)
}

/// Both sides of `F^(2 - lambda) (1 - F)^(1 + lambda) = c f`.
pub fn lemma1_sides(dist: &dyn DistributionModel, lambda: f64, c: f64, x: f64) -> Result<(f64, f64)> {
    check_lambda(lambda)?;
    if !(c > 0.0) || !c.is_finite() {
        return Err(invalid("c", format!("must be positive, got {c}")));
    }
    let p = dist.evaluate(x);
    if !(p.cdf > 0.0 && p.cdf < 1.0) {
        return Err(Error::DegenerateConditioning { probability: p.cdf });
    }
    Ok((p.cdf.powf(2.0 - lambda) * p.sf.powf(1.0 + lambda), c * p.pdf))
}

/// `F(x)^(2 - lambda) (1 - F(x))^(1 + lambda) - c f(x)`: the differential
/// equation whose only continuous cdf solutions are the Q-family members
/// with parameters `(lambda, c)`.
pub fn lemma1_ode_residual(dist: &dyn DistributionModel, lambda: f64, c: f64, x: f64) -> Result<f64> {
    let (lhs, rhs) = lemma1_sides(dist, lambda, c, x)?;
    Ok(lhs - rhs)
}

/// Both sides of `-(nu - 1) x int_{-inf}^x t dF = (nu - 2)[F(x) - int_{-inf}^x t^2 dF]`
/// for an arbitrary model.
pub fn star_sides_for(dist: &dyn DistributionModel, nu: u32, x: f64) -> Result<(f64, f64)> {
    check_nu(nu)?;
    let nu = nu as f64;
    let first = truncated_moment(dist, 1, x, Side::Below)?;
    let second = truncated_moment(dist, 2, x, Side::Below)?;
    Ok((-(nu - 1.0) * x * first, (nu - 2.0) * (dist.cdf(x) - second)))
}

/// The integrated relation satisfied by the unit-variance t density,
/// evaluated for `dist`. Nonzero for distributions outside the family.
pub fn star_residual_for(dist: &dyn DistributionModel, nu: u32, x: f64) -> Result<f64> {
    let (lhs, rhs) = star_sides_for(dist, nu, x)?;
    Ok(lhs - rhs)
}

/// [`star_residual_for`] with the unit-variance t density of `nu` degrees
/// of freedom.
pub fn star_residual(nu: u32, x: f64) -> Result<f64> {
    check_nu(nu)?;
    star_residual_for(&StandardizedT::new(nu as f64)?, nu, x)
}

/// Central-difference slope of `ln z_pdf` and the closed-form slope
/// `-(nu + 1)/(nu - 2) x / (1 + x^2/(nu - 2))`.
pub fn log_slope_sides(nu: u32, x: f64, h: f64) -> Result<(f64, f64)> {
    check_nu(nu)?;
    if !(h > 0.0) || !h.is_finite() {
        return Err(invalid("h", format!("step must be positive, got {h}")));
    }
    let z = StandardizedT::new(nu as f64)?;
    let nu = nu as f64;
    let slope = (z.pdf(x + h).ln() - z.pdf(x - h).ln()) / (2.0 * h);
    Ok((slope, -(nu + 1.0) / (nu - 2.0) * x / (1.0 + x * x / (nu - 2.0))))
}

/// Finite-difference check of `f'/f = -(nu + 1)/(nu - 2) x / (1 + x^2/(nu - 2))`
/// for the unit-variance t density; `O(h^2)`.
pub fn log_slope_residual(nu: u32, x: f64, h: f64) -> Result<f64> {
    let (lhs, rhs) = log_slope_sides(nu, x, h)?;
    Ok(lhs - rhs)
}

/// Evaluates `sides` at every grid point (in parallel, order preserved).
pub fn grid_report<F>(x_grid: &[f64], tol: f64, sides: F) -> Result<ResidualReport>
where
    F: Fn(f64) -> Result<(f64, f64)> + Sync,
{
    let values = x_grid.par_iter().map(|&x| sides(x)).collect::<Result<Vec<_>>>()?;
    Ok(ResidualReport::from_sides(x_grid.to_vec(), values, tol))
}

pub fn theorem1_report(
    dist: &dyn DistributionModel,
    lambda: f64,
    ctx: &OrderStatContext,
    x_grid: &[f64],
    tol: f64,
) -> Result<ResidualReport> {
    grid_report(x_grid, tol, |x| theorem1_sides(dist, lambda, ctx, x))
}

/// Second-moment residual report about `center`, with the `1 + x^2`
/// normalization attached. Pass/fail uses the raw residual.
pub fn theorem2_report(
    dist: &dyn DistributionModel,
    nu: u32,
    ctx: &OrderStatContext,
    x_grid: &[f64],
    center: f64,
    tol: f64,
) -> Result<ResidualReport> {
    Ok(grid_report(x_grid, tol, |x| theorem2_sides(dist, nu, ctx, x, center))?.with_normalized())
}

pub fn lemma1_report(dist: &dyn DistributionModel, lambda: f64, c: f64, x_grid: &[f64], tol: f64) -> Result<ResidualReport> {
    grid_report(x_grid, tol, |x| lemma1_sides(dist, lambda, c, x))
}

pub fn star_report(nu: u32, x_grid: &[f64], tol: f64) -> Result<ResidualReport> {
    check_nu(nu)?;
    let z = StandardizedT::new(nu as f64)?;
    grid_report(x_grid, tol, |x| star_sides_for(&z, nu, x))
}

pub fn log_slope_report(nu: u32, h: f64, x_grid: &[f64], tol: f64) -> Result<ResidualReport> {
    grid_report(x_grid, tol, |x| log_slope_sides(nu, x, h))
}
