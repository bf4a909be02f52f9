//! Distributions outside the characterized families, used as negative
//! controls.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::{check_level, DistributionModel, TailIndices};
use crate::error::{invalid, Result};
use crate::numerics::{invert_monotone, Interval};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normal {
    mu: f64,
    sigma: f64,
}

impl Normal {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(invalid("mu", "must be finite"));
        }
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(invalid("sigma", format!("must be positive, got {sigma}")));
        }
        Ok(Self { mu, sigma })
    }

    pub fn standard() -> Self {
        Self { mu: 0.0, sigma: 1.0 }
    }
}

impl DistributionModel for Normal {
    fn label(&self) -> String {
        format!("normal(mu={}, sigma={})", self.mu, self.sigma)
    }

    fn pdf(&self, x: f64) -> f64 {
        let z = (x - self.mu) / self.sigma;
        (-0.5 * z * z).exp() / ((2.0 * PI).sqrt() * self.sigma)
    }

    fn cdf(&self, x: f64) -> f64 {
        0.5 * libm::erfc(-(x - self.mu) / self.sigma * FRAC_1_SQRT_2)
    }

    fn sf(&self, x: f64) -> f64 {
        0.5 * libm::erfc((x - self.mu) / self.sigma * FRAC_1_SQRT_2)
    }

    fn quantile(&self, u: f64) -> Result<f64> {
        let u = check_level(u)?;
        let z = if u <= 0.5 {
            invert_monotone(|z| 0.5 * libm::erfc(-z * FRAC_1_SQRT_2), u, Interval { lower: -1.0, upper: 1.0 }, 0.0)?
        } else {
            // Solve on the survival function to keep precision near 1.
            -invert_monotone(
                |z| 0.5 * libm::erfc(-z * FRAC_1_SQRT_2),
                1.0 - u,
                Interval { lower: -1.0, upper: 1.0 },
                0.0,
            )?
        };
        Ok(self.mu + self.sigma * z)
    }

    fn support(&self) -> Interval {
        Interval::real_line()
    }

    fn tail_indices(&self) -> TailIndices {
        TailIndices::LIGHT
    }

    fn scale_hint(&self) -> f64 {
        self.sigma
    }
}

/// Unit exponential shifted to mean zero: `X = E - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ShiftedExponential;

impl DistributionModel for ShiftedExponential {
    fn label(&self) -> String {
        "exponential(rate=1) - 1".into()
    }

    fn pdf(&self, x: f64) -> f64 {
        if x < -1.0 {
            0.0
        } else {
            (-(x + 1.0)).exp()
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= -1.0 {
            0.0
        } else {
            -(-(x + 1.0)).exp_m1()
        }
    }

    fn sf(&self, x: f64) -> f64 {
        if x <= -1.0 {
            1.0
        } else {
            (-(x + 1.0)).exp()
        }
    }

    fn quantile(&self, u: f64) -> Result<f64> {
        let u = check_level(u)?;
        Ok(-(-u).ln_1p() - 1.0)
    }

    fn support(&self) -> Interval {
        Interval::above(-1.0)
    }

    fn tail_indices(&self) -> TailIndices {
        TailIndices::LIGHT
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uniform {
    lower: f64,
    upper: f64,
}

impl Uniform {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !lower.is_finite() || !upper.is_finite() || lower >= upper {
            return Err(invalid("bounds", format!("uniform requires lower < upper, got ({lower}, {upper})")));
        }
        Ok(Self { lower, upper })
    }

    pub fn unit() -> Self {
        Self { lower: 0.0, upper: 1.0 }
    }
}

impl DistributionModel for Uniform {
    fn label(&self) -> String {
        format!("uniform({}, {})", self.lower, self.upper)
    }

    fn pdf(&self, x: f64) -> f64 {
        if x >= self.lower && x <= self.upper {
            1.0 / (self.upper - self.lower)
        } else {
            0.0
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        ((x - self.lower) / (self.upper - self.lower)).clamp(0.0, 1.0)
    }

    fn sf(&self, x: f64) -> f64 {
        ((self.upper - x) / (self.upper - self.lower)).clamp(0.0, 1.0)
    }

    fn quantile(&self, u: f64) -> Result<f64> {
        let u = check_level(u)?;
        Ok(self.lower + u * (self.upper - self.lower))
    }

    fn support(&self) -> Interval {
        Interval {
            lower: self.lower,
            upper: self.upper,
        }
    }

    fn tail_indices(&self) -> TailIndices {
        TailIndices::LIGHT
    }

    fn scale_hint(&self) -> f64 {
        self.upper - self.lower
    }
}
