//! The Q-family: distributions given by the quantile function
//!
//! ```text
//! Q(u) = c (u - lambda) / (lambda (1 - lambda) (1 - u)^lambda u^(1 - lambda)) + d
//! ```
//!
//! with `0 < lambda < 1`, `c > 0`. Its derivative is
//! `Q'(u) = c (1 - u)^-(1 + lambda) u^-(2 - lambda)`, so the density at
//! `x = Q(u)` is `(1 - u)^(1 + lambda) u^(2 - lambda) / c`. The cdf has no
//! closed form and is obtained by inverting `Q` in log-odds space.

use serde::{Deserialize, Serialize};

use super::{check_level, DistributionModel, MomentRoute, PointValues, TailIndices};
use crate::error::{invalid, Result};
use crate::numerics::{invert_monotone, logistic, Interval};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QFamilyParams {
    pub lambda: f64,
    pub c: f64,
    pub d: f64,
}

impl QFamilyParams {
    pub fn new(lambda: f64, c: f64, d: f64) -> Result<Self> {
        let p = Self { lambda, c, d };
        p.validate()?;
        Ok(p)
    }

    /// The member equal to the standard t distribution with two degrees of
    /// freedom: `lambda = 1/2`, `c = sqrt(2)/4`, `d = 0`.
    pub fn t2() -> Self {
        Self {
            lambda: 0.5,
            c: std::f64::consts::SQRT_2 / 4.0,
            d: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(invalid("lambda", format!("must lie in (0, 1), got {}", self.lambda)));
        }
        if !(self.c > 0.0) || !self.c.is_finite() {
            return Err(invalid("c", format!("must be positive, got {}", self.c)));
        }
        if !self.d.is_finite() {
            return Err(invalid("d", format!("must be finite, got {}", self.d)));
        }
        Ok(())
    }

    /// `Q` at level `u` with `v = 1 - u` passed separately.
    pub(crate) fn quantile_split(&self, u: f64, v: f64) -> f64 {
        let l = self.lambda;
        self.c * (u - l) / (l * (1.0 - l) * v.powf(l) * u.powf(1.0 - l)) + self.d
    }

    /// `1 / Q'` at level `u` with `v = 1 - u`.
    pub(crate) fn density_split(&self, u: f64, v: f64) -> f64 {
        let l = self.lambda;
        v.powf(1.0 + l) * u.powf(2.0 - l) / self.c
    }

    /// `Q'(u)`.
    pub fn quantile_derivative(&self, u: f64) -> f64 {
        let l = self.lambda;
        self.c * (1.0 - u).powf(-(1.0 + l)) * u.powf(-(2.0 - l))
    }

    /// Log-odds `s` with `Q(logistic(s)) = x`, to full precision.
    pub(crate) fn log_odds_of(&self, x: f64) -> Result<f64> {
        let l = self.lambda;
        let centre = (l / (1.0 - l)).ln();
        invert_monotone(
            |s| self.quantile_split(logistic(s), logistic(-s)),
            x,
            Interval {
                lower: centre - 1.0,
                upper: centre + 1.0,
            },
            0.0,
        )
    }
}

/// `Q_lambda(u)`.
pub fn qfam_quantile(params: &QFamilyParams, u: f64) -> Result<f64> {
    params.validate()?;
    let u = check_level(u)?;
    Ok(params.quantile_split(u, 1.0 - u))
}

/// `(F(x), f(x))` for a Q-family member.
pub fn qfam_cdf_pdf(params: &QFamilyParams, x: f64) -> Result<(f64, f64)> {
    params.validate()?;
    if x == f64::NEG_INFINITY {
        return Ok((0.0, 0.0));
    }
    if x == f64::INFINITY {
        return Ok((1.0, 0.0));
    }
    let s = params.log_odds_of(x)?;
    let (u, v) = (logistic(s), logistic(-s));
    Ok((u, params.density_split(u, v)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QFamily {
    params: QFamilyParams,
}

impl QFamily {
    pub fn new(params: QFamilyParams) -> Result<Self> {
        params.validate()?;
        Ok(Self { params })
    }

    pub fn params(&self) -> &QFamilyParams {
        &self.params
    }

    fn levels(&self, x: f64) -> (f64, f64) {
        if x == f64::NEG_INFINITY {
            return (0.0, 1.0);
        }
        if x == f64::INFINITY {
            return (1.0, 0.0);
        }
        match self.params.log_odds_of(x) {
            Ok(s) => (logistic(s), logistic(-s)),
            Err(_) => (f64::NAN, f64::NAN),
        }
    }
}

impl DistributionModel for QFamily {
    fn label(&self) -> String {
        let p = &self.params;
        format!("qfamily(lambda={}, c={}, d={})", p.lambda, p.c, p.d)
    }

    fn pdf(&self, x: f64) -> f64 {
        let (u, v) = self.levels(x);
        self.params.density_split(u, v)
    }

    fn cdf(&self, x: f64) -> f64 {
        self.levels(x).0
    }

    fn sf(&self, x: f64) -> f64 {
        self.levels(x).1
    }

    fn quantile(&self, u: f64) -> Result<f64> {
        let u = check_level(u)?;
        Ok(self.params.quantile_split(u, 1.0 - u))
    }

    fn support(&self) -> Interval {
        Interval::real_line()
    }

    /// Near 0, `Q(u) ~ u^-(1 - lambda)`; near 1, `Q(u) ~ (1 - u)^-lambda`.
    fn tail_indices(&self) -> TailIndices {
        TailIndices {
            lower: 1.0 / (1.0 - self.params.lambda),
            upper: 1.0 / self.params.lambda,
        }
    }

    fn moment_route(&self) -> MomentRoute {
        MomentRoute::Quantile
    }

    fn scale_hint(&self) -> f64 {
        self.params.c
    }

    fn log_odds(&self, x: f64) -> f64 {
        match x {
            f64::NEG_INFINITY => f64::NEG_INFINITY,
            f64::INFINITY => f64::INFINITY,
            _ => self.params.log_odds_of(x).unwrap_or(f64::NAN),
        }
    }

    fn evaluate(&self, x: f64) -> PointValues {
        let (u, v) = self.levels(x);
        PointValues {
            cdf: u,
            sf: v,
            pdf: self.params.density_split(u, v),
        }
    }

    fn quantile_at_log_odds(&self, s: f64) -> f64 {
        self.params.quantile_split(logistic(s), logistic(-s))
    }
}
