//! Distribution models used by the characterization checks.

mod controls;
mod fit;
mod qfamily;
mod sampling;
mod student_t;

use std::fmt;

use crate::error::Result;
use crate::numerics::{logistic, Interval};

pub use controls::{Normal, ShiftedExponential, Uniform};
pub use fit::{fit_qfamily, QFamilyFit};
pub use qfamily::{qfam_cdf_pdf, qfam_quantile, QFamily, QFamilyParams};
pub use sampling::{sample, sample_stream, stream_rng};
pub use student_t::{t_cdf, t_pdf, t_quantile, z_pdf, StandardizedT, StudentT, StudentTParams};

/// Probability levels are clamped to this band before a quantile is
/// evaluated so that the poles at 0 and 1 never overflow.
pub const QUANTILE_CLAMP: f64 = 1e-15;

pub(crate) fn clamp_level(u: f64) -> f64 {
    u.clamp(QUANTILE_CLAMP, 1.0 - QUANTILE_CLAMP)
}

pub(crate) fn check_level(u: f64) -> Result<f64> {
    if u > 0.0 && u < 1.0 {
        Ok(clamp_level(u))
    } else {
        Err(crate::Error::Domain(format!(
            "probability level must lie in (0, 1), got {u}"
        )))
    }
}

/// Power-tail indices of a distribution: the moment of order `r` is finite
/// on a side iff `r` is below that side's index. Light or bounded tails use
/// `f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailIndices {
    pub lower: f64,
    pub upper: f64,
}

impl TailIndices {
    pub const LIGHT: TailIndices = TailIndices {
        lower: f64::INFINITY,
        upper: f64::INFINITY,
    };

    pub fn lower_allows(&self, order: u32) -> bool {
        (order as f64) < self.lower
    }

    pub fn upper_allows(&self, order: u32) -> bool {
        (order as f64) < self.upper
    }

    pub fn allows(&self, order: u32) -> bool {
        self.lower_allows(order) && self.upper_allows(order)
    }
}

/// Distribution function, survival function and density at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointValues {
    pub cdf: f64,
    pub sf: f64,
    pub pdf: f64,
}

/// How truncated moments of a distribution are best computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentRoute {
    /// Integrate `t^r f(t)` in the original variable (cheap cdf).
    Density,
    /// Integrate `Q(u)^r` over probability levels (cheap quantile).
    Quantile,
}

/// The contract every distribution satisfies: density, distribution and
/// quantile functions, support, and which moments exist.
pub trait DistributionModel: fmt::Debug + Send + Sync {
    /// Short human-readable label.
    fn label(&self) -> String;

    fn pdf(&self, x: f64) -> f64;

    fn cdf(&self, x: f64) -> f64;

    /// Survival function `1 - F(x)`, overridden where it can be computed
    /// without cancellation.
    fn sf(&self, x: f64) -> f64 {
        1.0 - self.cdf(x)
    }

    /// Quantile function on `(0, 1)`; levels outside are a domain error.
    fn quantile(&self, u: f64) -> Result<f64>;

    fn support(&self) -> Interval;

    fn tail_indices(&self) -> TailIndices;

    fn has_first_moment(&self) -> bool {
        self.tail_indices().allows(1)
    }

    fn has_second_moment(&self) -> bool {
        self.tail_indices().allows(2)
    }

    fn moment_route(&self) -> MomentRoute {
        MomentRoute::Density
    }

    /// Typical length scale, used to size quadrature tail maps.
    fn scale_hint(&self) -> f64 {
        1.0
    }

    /// `ln(F(x) / (1 - F(x)))`.
    fn log_odds(&self, x: f64) -> f64 {
        self.cdf(x).ln() - self.sf(x).ln()
    }

    /// `F(x)`, `1 - F(x)` and `f(x)` in one call, for models where they
    /// share an expensive step.
    fn evaluate(&self, x: f64) -> PointValues {
        PointValues {
            cdf: self.cdf(x),
            sf: self.sf(x),
            pdf: self.pdf(x),
        }
    }

    /// `Q(logistic(s))`. Quantile-route models override this to keep full
    /// precision deep in both tails.
    fn quantile_at_log_odds(&self, s: f64) -> f64 {
        self.quantile(logistic(s)).unwrap_or(f64::NAN)
    }
}

impl<T: DistributionModel + ?Sized> DistributionModel for &T {
    fn label(&self) -> String {
        (**self).label()
    }
    fn pdf(&self, x: f64) -> f64 {
        (**self).pdf(x)
    }
    fn cdf(&self, x: f64) -> f64 {
        (**self).cdf(x)
    }
    fn sf(&self, x: f64) -> f64 {
        (**self).sf(x)
    }
    fn quantile(&self, u: f64) -> Result<f64> {
        (**self).quantile(u)
    }
    fn support(&self) -> Interval {
        (**self).support()
    }
    fn tail_indices(&self) -> TailIndices {
        (**self).tail_indices()
    }
    fn has_first_moment(&self) -> bool {
        (**self).has_first_moment()
    }
    fn has_second_moment(&self) -> bool {
        (**self).has_second_moment()
    }
    fn moment_route(&self) -> MomentRoute {
        (**self).moment_route()
    }
    fn scale_hint(&self) -> f64 {
        (**self).scale_hint()
    }
    fn log_odds(&self, x: f64) -> f64 {
        (**self).log_odds(x)
    }
    fn evaluate(&self, x: f64) -> PointValues {
        (**self).evaluate(x)
    }
    fn quantile_at_log_odds(&self, s: f64) -> f64 {
        (**self).quantile_at_log_odds(s)
    }
}

impl<T: DistributionModel + ?Sized> DistributionModel for Box<T> {
    fn label(&self) -> String {
        (**self).label()
    }
    fn pdf(&self, x: f64) -> f64 {
        (**self).pdf(x)
    }
    fn cdf(&self, x: f64) -> f64 {
        (**self).cdf(x)
    }
    fn sf(&self, x: f64) -> f64 {
        (**self).sf(x)
    }
    fn quantile(&self, u: f64) -> Result<f64> {
        (**self).quantile(u)
    }
    fn support(&self) -> Interval {
        (**self).support()
    }
    fn tail_indices(&self) -> TailIndices {
        (**self).tail_indices()
    }
    fn has_first_moment(&self) -> bool {
        (**self).has_first_moment()
    }
    fn has_second_moment(&self) -> bool {
        (**self).has_second_moment()
    }
    fn moment_route(&self) -> MomentRoute {
        (**self).moment_route()
    }
    fn scale_hint(&self) -> f64 {
        (**self).scale_hint()
    }
    fn log_odds(&self, x: f64) -> f64 {
        (**self).log_odds(x)
    }
    fn evaluate(&self, x: f64) -> PointValues {
        (**self).evaluate(x)
    }
    fn quantile_at_log_odds(&self, s: f64) -> f64 {
        (**self).quantile_at_log_odds(s)
    }
}
