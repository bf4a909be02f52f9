//! Conditional moments of order statistics given `X_{k:n} = x`.
//!
//! Given `X_{k:n} = x`, the `k - 1` smaller observations behave like an
//! ordered sample of independent draws from `F` truncated to `(-inf, x)`,
//! and the `n - k` larger ones like draws truncated to `(x, inf)`. Averaging
//! over ranks therefore removes the order: the mean of
//! `E[X_{i:n}^r | X_{k:n} = x]` over `i < k` is `F(x)^-1 int_{-inf}^x t^r dF`,
//! and over `j > k` it is `(1 - F(x))^-1 int_x^inf t^r dF`, whatever `n`
//! and `k` are. [`avg_cond_moment`] evaluates that closed form;
//! [`cond_density_average`] integrates the per-rank conditional densities
//! one by one and serves as its independent check.

use serde::{Deserialize, Serialize};

use crate::distributions::{DistributionModel, MomentRoute};
use crate::error::{invalid, Error, Result};
use crate::numerics::{integrate_with, logistic, Interval, QuadratureOptions, TailMap};

/// Conditioning probabilities closer than this to 0 or 1 are rejected.
pub const DEGENERACY_EPS: f64 = 1e-12;

/// Tolerances used for truncated moments. Tighter than the quadrature
/// defaults because the normalizers `1/F` and `1/(1 - F)` amplify errors.
pub const MOMENT_REL_TOL: f64 = 1e-13;
pub const MOMENT_ABS_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Below,
    Above,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Below => "below",
            Side::Above => "above",
        }
    }
}

/// Sample size `n`, conditioning rank `k` and moment power `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderStatContext {
    pub n: usize,
    pub k: usize,
    pub r: u32,
}

impl OrderStatContext {
    pub fn new(n: usize, k: usize, r: u32) -> Result<Self> {
        if n < 2 {
            return Err(invalid("n", format!("sample size must be >= 2, got {n}")));
        }
        if k < 1 || k > n {
            return Err(invalid("k", format!("rank must lie in 1..={n}, got {k}")));
        }
        if r < 1 {
            return Err(invalid("r", "moment power must be >= 1"));
        }
        Ok(Self { n, k, r })
    }

    pub fn with_power(self, r: u32) -> Self {
        Self { r, ..self }
    }

    /// Below-side averages need `2 <= k <= n`, above-side `1 <= k <= n - 1`.
    pub fn check_side(&self, side: Side) -> Result<()> {
        let ok = match side {
            Side::Below => self.k >= 2 && self.k <= self.n,
            Side::Above => self.k >= 1 && self.k < self.n,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Rank(format!(
                "k = {} has no observations {} it in a sample of {}",
                self.k,
                side.name(),
                self.n
            )))
        }
    }

    /// Ranks with observations on both sides: `2 <= k <= n - 1`.
    pub fn check_interior(&self) -> Result<()> {
        if self.k >= 2 && self.k < self.n {
            Ok(())
        } else {
            Err(Error::Rank(format!(
                "k = {} must satisfy 2 <= k <= n - 1 with n = {}",
                self.k, self.n
            )))
        }
    }

    /// All `(n, k)` with `n` in `n_range` and `2 <= k <= n - 1`.
    pub fn interior_pairs(n_range: std::ops::RangeInclusive<usize>) -> Vec<(usize, usize)> {
        n_range
            .flat_map(|n| (2..n).map(move |k| (n, k)))
            .collect()
    }
}

fn check_moment(dist: &dyn DistributionModel, r: u32, side: Side) -> Result<()> {
    let tails = dist.tail_indices();
    let ok = match side {
        Side::Below => tails.lower_allows(r),
        Side::Above => tails.upper_allows(r),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::MomentNotFinite {
            order: r,
            side: side.name(),
        })
    }
}

fn tail_map_for(tail_index: f64) -> TailMap {
    if tail_index.is_finite() {
        TailMap::Exponential
    } else {
        TailMap::Rational
    }
}

/// `int t^r dF(t)` over `(-inf, x]` (`Below`) or `[x, inf)` (`Above`).
///
/// Quantile-route models integrate `Q(u)^r` over probability levels,
/// written in log-odds `s` as `Q(logistic(s))^r u (1 - u) ds` so that the
/// endpoint singularities of `Q` become exponentially decaying tails.
/// Density-route models integrate `t^r f(t)` directly.
pub fn truncated_moment(dist: &dyn DistributionModel, r: u32, x: f64, side: Side) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain("conditioning value is NaN".into()));
    }
    if r > 0 {
        check_moment(dist, r, side)?;
    }
    let opts = QuadratureOptions::with_tolerances(MOMENT_REL_TOL, MOMENT_ABS_TOL);
    let power = |t: f64| if r == 0 { 1.0 } else { t.powi(r as i32) };

    match dist.moment_route() {
        MomentRoute::Quantile => {
            let s_x = dist.log_odds(x);
            let tails = dist.tail_indices();
            let (domain, tail) = match side {
                Side::Below if s_x == f64::NEG_INFINITY => return Ok(0.0),
                Side::Above if s_x == f64::INFINITY => return Ok(0.0),
                Side::Below => (Interval::below(s_x), tails.lower),
                Side::Above => (Interval::above(s_x), tails.upper),
            };
            let domain = if s_x.is_infinite() {
                Interval::real_line()
            } else {
                domain
            };
            if s_x.is_nan() {
                return Err(Error::Domain(format!("could not locate F({x})")));
            }
            // Decay rate of the integrand in s is 1 - r / tail_index.
            let rate = 1.0 - r as f64 / tail;
            let scale = if rate > 0.0 { (1.0 / rate).clamp(1.0, 100.0) } else { 1.0 };
            let integrand = |s: f64| {
                let u = logistic(s);
                let v = logistic(-s);
                if u == 0.0 || v == 0.0 {
                    return 0.0;
                }
                power(dist.quantile_at_log_odds(s)) * u * v
            };
            let opts = opts.scale(scale);
            Ok(integrate_with(integrand, domain, &opts)?.value)
        }
        MomentRoute::Density => {
            // A tail map anchored far from the bulk cannot resolve it, so a
            // conditioning value past the median on the integrated side is
            // handled as the total moment minus the opposite tail.
            let median = dist.quantile(0.5)?;
            let far = match side {
                Side::Below => x > median,
                Side::Above => x < median,
            };
            if far {
                check_moment(dist, r, Side::Below)?;
                check_moment(dist, r, Side::Above)?;
                let total = density_moment(dist, r, median, Side::Below)? + density_moment(dist, r, median, Side::Above)?;
                let other = match side {
                    Side::Below => Side::Above,
                    Side::Above => Side::Below,
                };
                Ok(total - density_moment(dist, r, x, other)?)
            } else {
                density_moment(dist, r, x, side)
            }
        }
    }
}

/// One-sided `int t^r f(t) dt` with the tail map anchored at `x`.
fn density_moment(dist: &dyn DistributionModel, r: u32, x: f64, side: Side) -> Result<f64> {
    let support = dist.support();
    let (lo, hi, tail) = match side {
        Side::Below => (support.lower, x.min(support.upper), dist.tail_indices().lower),
        Side::Above => (x.max(support.lower), support.upper, dist.tail_indices().upper),
    };
    if lo >= hi {
        return Ok(0.0);
    }
    let integrand = |t: f64| {
        let f = dist.pdf(t);
        if f == 0.0 {
            0.0
        } else {
            t.powi(r as i32) * f
        }
    };
    let opts = QuadratureOptions::with_tolerances(MOMENT_REL_TOL, MOMENT_ABS_TOL)
        .tail_map(tail_map_for(tail))
        .scale(dist.scale_hint());
    Ok(integrate_with(integrand, Interval { lower: lo, upper: hi }, &opts)?.value)
}

/// Probability mass on the conditioning side: `F(x)` or `1 - F(x)`,
/// rejecting degenerate conditioning.
fn side_mass(dist: &dyn DistributionModel, x: f64, side: Side) -> Result<f64> {
    let values = dist.evaluate(x);
    if !(values.cdf > DEGENERACY_EPS && values.cdf < 1.0 - DEGENERACY_EPS) {
        return Err(Error::DegenerateConditioning {
            probability: values.cdf,
        });
    }
    Ok(match side {
        Side::Below => values.cdf,
        Side::Above => values.sf,
    })
}

/// Average conditional moment of the order statistics on one side of
/// `X_{k:n} = x`: the truncated moment divided by the side's mass.
pub fn avg_cond_moment(dist: &dyn DistributionModel, ctx: &OrderStatContext, x: f64, side: Side) -> Result<f64> {
    ctx.check_side(side)?;
    let mass = side_mass(dist, x, side)?;
    Ok(truncated_moment(dist, ctx.r, x, side)? / mass)
}

fn ln_factorial(m: usize) -> f64 {
    (1..=m).map(|i| (i as f64).ln()).sum()
}

/// Density at `t` of `X_{j:n}` given `X_{k:n} = x`.
///
/// For `j < k` this is the density of the `j`-th order statistic of
/// `k - 1` draws from `F` truncated to `(-inf, x)`; for `j > k`, of the
/// `(j - k)`-th of `n - k` draws truncated to `(x, inf)`.
pub fn cond_density(dist: &dyn DistributionModel, n: usize, k: usize, j: usize, x: f64, t: f64) -> Result<f64> {
    if n < 2 || k < 1 || k > n || j < 1 || j > n || j == k {
        return Err(Error::Rank(format!(
            "need 1 <= j, k <= n with j != k, got n = {n}, k = {k}, j = {j}"
        )));
    }
    let at_x = dist.evaluate(x);
    if !(at_x.cdf > 0.0 && at_x.cdf < 1.0) {
        return Err(Error::DegenerateConditioning {
            probability: at_x.cdf,
        });
    }
    Ok(cond_density_with(dist, n, k, j, at_x.cdf, at_x.sf, x, t))
}

#[allow(clippy::too_many_arguments)]
fn cond_density_with(
    dist: &dyn DistributionModel,
    n: usize,
    k: usize,
    j: usize,
    fx: f64,
    sx: f64,
    x: f64,
    t: f64,
) -> f64 {
    if j < k {
        if t >= x {
            return 0.0;
        }
        let at_t = dist.evaluate(t);
        if at_t.pdf == 0.0 {
            return 0.0;
        }
        let ln_coef = ln_factorial(k - 1) - ln_factorial(j - 1) - ln_factorial(k - 1 - j);
        let gap = (fx - at_t.cdf).max(0.0);
        let ln_body = (j - 1) as f64 * ln_or_zero(at_t.cdf, j - 1)
            + (k - 1 - j) as f64 * ln_or_zero(gap, k - 1 - j)
            - (k - 1) as f64 * fx.ln();
        at_t.pdf * (ln_coef + ln_body).exp()
    } else {
        if t <= x {
            return 0.0;
        }
        let at_t = dist.evaluate(t);
        if at_t.pdf == 0.0 {
            return 0.0;
        }
        let ln_coef = ln_factorial(n - k) - ln_factorial(j - k - 1) - ln_factorial(n - j);
        let gap = (sx - at_t.sf).max(0.0);
        let ln_body = (j - k - 1) as f64 * ln_or_zero(gap, j - k - 1)
            + (n - j) as f64 * ln_or_zero(at_t.sf, n - j)
            - (n - k) as f64 * sx.ln();
        at_t.pdf * (ln_coef + ln_body).exp()
    }
}

/// `ln(value)` when raised to a positive power, else 0 so that `0^0 = 1`.
fn ln_or_zero(value: f64, exponent: usize) -> f64 {
    if exponent == 0 {
        0.0
    } else {
        value.ln()
    }
}

/// `E[X_{j:n}^r | X_{k:n} = x]` by direct quadrature of [`cond_density`].
pub fn cond_moment_by_density(dist: &dyn DistributionModel, n: usize, k: usize, j: usize, r: u32, x: f64) -> Result<f64> {
    // Validates ranks and conditioning.
    cond_density(dist, n, k, j, x, x)?;
    let side = if j < k { Side::Below } else { Side::Above };
    if r > 0 {
        check_moment(dist, r, side)?;
    }
    let at_x = dist.evaluate(x);
    let support = dist.support();
    let (lo, hi, tail) = match side {
        Side::Below => (support.lower, x, dist.tail_indices().lower),
        Side::Above => (x, support.upper, dist.tail_indices().upper),
    };
    let opts = QuadratureOptions::with_tolerances(1e-12, 1e-14)
        .tail_map(tail_map_for(tail))
        .scale(dist.scale_hint());
    let integrand = |t: f64| {
        let density = cond_density_with(dist, n, k, j, at_x.cdf, at_x.sf, x, t);
        if density == 0.0 {
            0.0
        } else {
            t.powi(r as i32) * density
        }
    };
    Ok(integrate_with(integrand, Interval { lower: lo, upper: hi }, &opts)?.value)
}

/// Rank-averaged conditional moment computed rank by rank from the
/// conditional densities, independent of [`truncated_moment`].
pub fn cond_density_average(dist: &dyn DistributionModel, ctx: &OrderStatContext, x: f64, side: Side) -> Result<f64> {
    ctx.check_side(side)?;
    let ranks: Vec<usize> = match side {
        Side::Below => (1..ctx.k).collect(),
        Side::Above => (ctx.k + 1..=ctx.n).collect(),
    };
    let mut total = 0.0;
    for &j in &ranks {
        total += cond_moment_by_density(dist, ctx.n, ctx.k, j, ctx.r, x)?;
    }
    Ok(total / ranks.len() as f64)
}

/// `int_{-inf}^x F(t) dt`.
pub fn cdf_integral_below(dist: &dyn DistributionModel, x: f64) -> Result<f64> {
    check_moment(dist, 1, Side::Below)?;
    let support = dist.support();
    if x <= support.lower {
        return Ok(0.0);
    }
    let opts = QuadratureOptions::with_tolerances(1e-12, 1e-14)
        .tail_map(tail_map_for(dist.tail_indices().lower))
        .scale(dist.scale_hint());
    Ok(integrate_with(|t| dist.cdf(t), Interval { lower: support.lower, upper: x }, &opts)?.value)
}

/// `int_x^inf (1 - F(t)) dt`.
pub fn sf_integral_above(dist: &dyn DistributionModel, x: f64) -> Result<f64> {
    check_moment(dist, 1, Side::Above)?;
    let support = dist.support();
    if x >= support.upper {
        return Ok(0.0);
    }
    let opts = QuadratureOptions::with_tolerances(1e-12, 1e-14)
        .tail_map(tail_map_for(dist.tail_indices().upper))
        .scale(dist.scale_hint());
    Ok(integrate_with(|t| dist.sf(t), Interval { lower: x, upper: support.upper }, &opts)?.value)
}
