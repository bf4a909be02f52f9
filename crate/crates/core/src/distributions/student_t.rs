//! Location-scale Student's t and the unit-variance density `Z_nu`.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use super::{check_level, DistributionModel, TailIndices};
use crate::error::{invalid, Error, Result};
use crate::numerics::{beta_inc_split, invert_monotone, log_gamma_unchecked, Interval};

/// Degrees of freedom, location and scale of a t distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudentTParams {
    pub nu: f64,
    pub mu: f64,
    pub sigma: f64,
}

impl StudentTParams {
    pub fn new(nu: f64, mu: f64, sigma: f64) -> Result<Self> {
        let p = Self { nu, mu, sigma };
        p.validate()?;
        Ok(p)
    }

    pub fn standard(nu: f64) -> Result<Self> {
        Self::new(nu, 0.0, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu >= 1.0) || !self.nu.is_finite() {
            return Err(invalid("nu", format!("must be a finite value >= 1, got {}", self.nu)));
        }
        if !self.mu.is_finite() {
            return Err(invalid("mu", format!("must be finite, got {}", self.mu)));
        }
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return Err(invalid("sigma", format!("must be positive, got {}", self.sigma)));
        }
        Ok(())
    }
}

/// `ln c_nu` for the standard t density.
fn ln_norm_const(nu: f64) -> f64 {
    log_gamma_unchecked(0.5 * (nu + 1.0)) - log_gamma_unchecked(0.5 * nu) - 0.5 * (PI * nu).ln()
}

fn std_pdf(nu: f64, z: f64) -> f64 {
    (ln_norm_const(nu) - 0.5 * (nu + 1.0) * (z * z / nu).ln_1p()).exp()
}

/// `P(T <= -|z|)` for the standard t, without cancellation.
fn std_lower_tail(nu: f64, z: f64) -> f64 {
    let w = z.abs();
    if w.is_infinite() {
        return 0.0;
    }
    if w == 0.0 {
        return 0.5;
    }
    if nu == 1.0 {
        return (1.0 / w).atan() / PI;
    }
    if nu == 2.0 {
        let r = (2.0 + w * w).sqrt();
        return 1.0 / (r * (r + w));
    }
    let denom = nu + w * w;
    0.5 * beta_inc_split(0.5 * nu, 0.5, nu / denom, w * w / denom)
}

fn std_cdf(nu: f64, z: f64) -> f64 {
    let tail = std_lower_tail(nu, z);
    if z <= 0.0 {
        tail
    } else {
        1.0 - tail
    }
}

fn std_sf(nu: f64, z: f64) -> f64 {
    std_cdf(nu, -z)
}

fn std_quantile(nu: f64, u: f64) -> Result<f64> {
    if nu == 1.0 {
        return Ok((PI * (u - 0.5)).tan());
    }
    if nu == 2.0 {
        return Ok(SQRT_2 * (u - 0.5) / (u * (1.0 - u)).sqrt());
    }
    if u == 0.5 {
        return Ok(0.0);
    }
    // Solve in the lower tail and reflect.
    let p = u.min(1.0 - u);
    let w = invert_monotone(
        |y: f64| if y >= 0.0 { 0.5 } else { std_lower_tail(nu, y) },
        p,
        Interval {
            lower: -2.0,
            upper: 0.0,
        },
        0.0,
    )?;
    Ok(if u < 0.5 { w } else { -w })
}

/// Density of the location-scale t distribution.
pub fn t_pdf(params: &StudentTParams, x: f64) -> f64 {
    let z = (x - params.mu) / params.sigma;
    std_pdf(params.nu, z) / params.sigma
}

/// Distribution function of the location-scale t distribution.
///
/// For two degrees of freedom this is the closed form
/// `(1 + z / sqrt(2 + z^2)) / 2`; otherwise it goes through the
/// regularized incomplete beta function.
pub fn t_cdf(params: &StudentTParams, x: f64) -> f64 {
    std_cdf(params.nu, (x - params.mu) / params.sigma)
}

/// Quantile function of the location-scale t distribution.
pub fn t_quantile(params: &StudentTParams, u: f64) -> Result<f64> {
    let u = check_level(u)?;
    Ok(params.mu + params.sigma * std_quantile(params.nu, u)?)
}

/// Unit-variance t density with `nu > 2` degrees of freedom:
/// `c (1 + x^2/(nu - 2))^(-(nu + 1)/2)` with
/// `c = Gamma((nu + 1)/2) / (Gamma(nu/2) sqrt((nu - 2) pi))`.
pub fn z_pdf(nu: f64, x: f64) -> Result<f64> {
    if !(nu > 2.0) || !nu.is_finite() {
        return Err(Error::Domain(format!("z_pdf requires nu > 2, got {nu}")));
    }
    let ln_c = log_gamma_unchecked(0.5 * (nu + 1.0))
        - log_gamma_unchecked(0.5 * nu)
        - 0.5 * ((nu - 2.0) * PI).ln();
    Ok((ln_c - 0.5 * (nu + 1.0) * (x * x / (nu - 2.0)).ln_1p()).exp())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudentT {
    params: StudentTParams,
}

impl StudentT {
    pub fn new(params: StudentTParams) -> Result<Self> {
        params.validate()?;
        Ok(Self { params })
    }

    pub fn standard(nu: f64) -> Result<Self> {
        Self::new(StudentTParams::standard(nu)?)
    }

    pub fn params(&self) -> &StudentTParams {
        &self.params
    }
}

impl DistributionModel for StudentT {
    fn label(&self) -> String {
        let p = &self.params;
        format!("t(nu={}, mu={}, sigma={})", p.nu, p.mu, p.sigma)
    }

    fn pdf(&self, x: f64) -> f64 {
        t_pdf(&self.params, x)
    }

    fn cdf(&self, x: f64) -> f64 {
        t_cdf(&self.params, x)
    }

    fn sf(&self, x: f64) -> f64 {
        std_sf(self.params.nu, (x - self.params.mu) / self.params.sigma)
    }

    fn quantile(&self, u: f64) -> Result<f64> {
        t_quantile(&self.params, u)
    }

    fn support(&self) -> Interval {
        Interval::real_line()
    }

    fn tail_indices(&self) -> TailIndices {
        TailIndices {
            lower: self.params.nu,
            upper: self.params.nu,
        }
    }

    fn scale_hint(&self) -> f64 {
        self.params.sigma
    }
}

/// The standardized (mean 0, variance 1) t distribution whose density is
/// [`z_pdf`]; equal in law to `T sqrt((nu - 2)/nu)` for `T ~ t_nu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardizedT {
    nu: f64,
    /// `sqrt(nu / (nu - 2))`
    stretch: f64,
}

impl StandardizedT {
    pub fn new(nu: f64) -> Result<Self> {
        if !(nu > 2.0) || !nu.is_finite() {
            return Err(invalid("nu", format!("standardized t requires nu > 2, got {nu}")));
        }
        Ok(Self {
            nu,
            stretch: (nu / (nu - 2.0)).sqrt(),
        })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }
}

impl DistributionModel for StandardizedT {
    fn label(&self) -> String {
        format!("z(nu={})", self.nu)
    }

    fn pdf(&self, x: f64) -> f64 {
        z_pdf(self.nu, x).unwrap_or(f64::NAN)
    }

    fn cdf(&self, x: f64) -> f64 {
        std_cdf(self.nu, x * self.stretch)
    }

    fn sf(&self, x: f64) -> f64 {
        std_sf(self.nu, x * self.stretch)
    }

    fn quantile(&self, u: f64) -> Result<f64> {
        let u = check_level(u)?;
        Ok(std_quantile(self.nu, u)? / self.stretch)
    }

    fn support(&self) -> Interval {
        Interval::real_line()
    }

    fn tail_indices(&self) -> TailIndices {
        TailIndices {
            lower: self.nu,
            upper: self.nu,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn std(nu: f64) -> StudentTParams {
        StudentTParams::standard(nu).unwrap()
    }

    #[test]
    fn pdf_at_origin() {
        assert!((t_pdf(&std(1.0), 0.0) - 1.0 / PI).abs() < 1e-15);
        assert!((t_pdf(&std(2.0), 0.0) - 0.353_553_390_593_273_73).abs() < 1e-15);
    }

    #[test]
    fn pdf_is_even() {
        for nu in [1.0, 2.0, 3.5, 7.0] {
            for x in [0.3, 1.0, 4.0, 40.0] {
                assert_eq!(t_pdf(&std(nu), x), t_pdf(&std(nu), -x));
            }
        }
    }

    #[test]
    fn cdf_examples() {
        for nu in [1.0, 2.0, 3.0, 5.5] {
            assert_eq!(t_cdf(&std(nu), 0.0), 0.5);
        }
        assert!((t_cdf(&std(2.0), 1.0) - 0.788_675_134_594_812_9).abs() < 1e-15);
        assert!((t_cdf(&std(1.0), 1.0) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn general_route_matches_closed_forms() {
        // The incomplete-beta path must agree with the nu = 1, 2 closed forms.
        for &z in &[-30.0, -3.0, -1.0, -0.2, 0.4, 2.0, 9.0] {
            for nu in [1.0, 2.0] {
                let denom = nu + z * z;
                let tail = 0.5 * beta_inc_split(0.5 * nu, 0.5, nu / denom, z * z / denom);
                let general = if z <= 0.0 { tail } else { 1.0 - tail };
                assert!((general - std_cdf(nu, z)).abs() < 1e-13, "nu={nu} z={z}");
            }
        }
    }

    #[test]
    fn quantile_examples() {
        assert_eq!(t_quantile(&StudentTParams::new(4.0, 1.3, 2.0).unwrap(), 0.5).unwrap(), 1.3);
        let q = t_quantile(&std(2.0), 0.788_675_134_594_812_9).unwrap();
        assert!((q - 1.0).abs() < 1e-12);
        assert!(t_quantile(&std(3.0), 0.0).is_err());
        assert!(t_quantile(&std(3.0), 1.0).is_err());
        assert!(t_quantile(&std(3.0), f64::NAN).is_err());
    }

    #[test]
    fn quantile_roundtrip() {
        for nu in [1.0, 2.0, 3.0, 4.5, 8.0] {
            let p = StudentTParams::new(nu, -0.7, 1.9).unwrap();
            for i in 1..200 {
                let u = i as f64 / 200.0;
                let x = t_quantile(&p, u).unwrap();
                assert!((t_cdf(&p, x) - u).abs() < 1e-10, "nu={nu} u={u}");
            }
        }
    }

    #[test]
    fn z_density_examples() {
        assert!((z_pdf(3.0, 0.0).unwrap() - 2.0 / PI).abs() < 1e-15);
        assert!(z_pdf(2.0, 0.0).is_err());
        for nu in [3.0f64, 5.0, 8.0] {
            let s = (nu / (nu - 2.0)).sqrt();
            for x in [-2.0, 0.0, 1.5] {
                let lhs = z_pdf(nu, x).unwrap();
                let rhs = s * t_pdf(&std(nu), x * s);
                assert!(((lhs - rhs) / rhs).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(StudentTParams::new(0.5, 0.0, 1.0).is_err());
        assert!(StudentTParams::new(2.0, 0.0, 0.0).is_err());
        assert!(StudentTParams::new(2.0, f64::NAN, 1.0).is_err());
        assert!(StandardizedT::new(2.0).is_err());
    }
}
