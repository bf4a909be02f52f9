//! Monte Carlo estimates of the conditional regressions.
//!
//! Samples of size `n` are drawn, sorted, and reduced to the pair
//! `(X_{k:n}, statistic)`. The pairs are split into equal-count bins by the
//! conditioning value; each bin's mean statistic is compared with the
//! theoretical regression evaluated at the bin's mean conditioning value.

use std::fmt;

use rand::distributions::{Distribution, Open01};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{stream_rng, DistributionModel};
use crate::error::{invalid, Error, Result};
use crate::order_stats::{avg_cond_moment, OrderStatContext, Side};

/// Replications per independently seeded stream. Fixed so that results do
/// not depend on how many threads run the chunks.
const CHUNK: usize = 2048;

/// Smallest admissible bin population.
pub const MIN_BIN_COUNT: usize = 10;

/// The statistic regressed on `X_{k:n}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum StatisticKind {
    /// Mean of `(X_{k:n} - X_{i:n})^r` over `i < k`.
    BelowAvgDeviation(u32),
    /// Mean of `(X_{j:n} - X_{k:n})^r` over `j > k`.
    AboveAvgDeviation(u32),
    /// The sample mean.
    SampleMean,
    /// `lambda * BelowAvgDeviation(1) - (1 - lambda) * AboveAvgDeviation(1)`.
    WeightedTheorem1(f64),
}

impl StatisticKind {
    fn validate(&self, n: usize, k: usize) -> Result<()> {
        match *self {
            StatisticKind::BelowAvgDeviation(r) | StatisticKind::AboveAvgDeviation(r) if !(1..=2).contains(&r) => {
                Err(invalid("r", format!("deviation power must be 1 or 2, got {r}")))
            }
            StatisticKind::BelowAvgDeviation(_) if k < 2 => {
                Err(Error::Rank(format!("k = {k} has no observations below it")))
            }
            StatisticKind::AboveAvgDeviation(_) if k >= n => {
                Err(Error::Rank(format!("k = {k} has no observations above it in a sample of {n}")))
            }
            StatisticKind::WeightedTheorem1(lambda) if !(lambda > 0.0 && lambda < 1.0) => {
                Err(invalid("lambda", format!("must lie in (0, 1), got {lambda}")))
            }
            StatisticKind::WeightedTheorem1(_) if k < 2 || k >= n => {
                Err(Error::Rank(format!("k = {k} must satisfy 2 <= k <= n - 1 with n = {n}")))
            }
            _ => Ok(()),
        }
    }

    /// The statistic for one sorted sample; `k` is 1-based.
    fn observe(&self, sorted: &[f64], k: usize) -> f64 {
        let x = sorted[k - 1];
        let below = |r: u32| {
            sorted[..k - 1].iter().map(|&t| (x - t).powi(r as i32)).sum::<f64>() / (k - 1) as f64
        };
        let above = |r: u32| {
            sorted[k..].iter().map(|&t| (t - x).powi(r as i32)).sum::<f64>() / (sorted.len() - k) as f64
        };
        match *self {
            StatisticKind::BelowAvgDeviation(r) => below(r),
            StatisticKind::AboveAvgDeviation(r) => above(r),
            StatisticKind::SampleMean => sorted.iter().sum::<f64>() / sorted.len() as f64,
            StatisticKind::WeightedTheorem1(lambda) => lambda * below(1) - (1.0 - lambda) * above(1),
        }
    }

    /// `E[statistic | X_{k:n} = x]` from the average conditional moments.
    pub fn theoretical(&self, dist: &dyn DistributionModel, n: usize, k: usize, x: f64) -> Result<f64> {
        let moment = |r: u32, side: Side| avg_cond_moment(dist, &OrderStatContext::new(n, k, r)?, x, side);
        Ok(match *self {
            StatisticKind::BelowAvgDeviation(1) => x - moment(1, Side::Below)?,
            StatisticKind::BelowAvgDeviation(_) => {
                x * x - 2.0 * x * moment(1, Side::Below)? + moment(2, Side::Below)?
            }
            StatisticKind::AboveAvgDeviation(1) => moment(1, Side::Above)? - x,
            StatisticKind::AboveAvgDeviation(_) => {
                moment(2, Side::Above)? - 2.0 * x * moment(1, Side::Above)? + x * x
            }
            StatisticKind::SampleMean => {
                let mut total = x;
                if k > 1 {
                    total += (k - 1) as f64 * moment(1, Side::Below)?;
                }
                if k < n {
                    total += (n - k) as f64 * moment(1, Side::Above)?;
                }
                total / n as f64
            }
            StatisticKind::WeightedTheorem1(lambda) => {
                lambda * (x - moment(1, Side::Below)?) - (1.0 - lambda) * (moment(1, Side::Above)? - x)
            }
        })
    }
}

/// Binned Monte Carlo regression of a statistic on `X_{k:n}`.
///
/// `bin_edges` has one more entry than the other sequences; its ends are the
/// smallest and largest observed conditioning values. `bin_centers` holds
/// the mean conditioning value within each bin, which is where
/// `theoretical` is evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionEstimate {
    pub bin_edges: Vec<f64>,
    pub bin_centers: Vec<f64>,
    pub counts: Vec<usize>,
    pub empirical_mean: Vec<f64>,
    pub std_err: Vec<f64>,
    pub theoretical: Vec<f64>,
    pub z_scores: Vec<f64>,
}

/// `(empirical - theoretical) / std_err`. A zero standard error gives 0 for
/// an exact match and saturates at `+-f64::MAX` otherwise.
fn z_score(empirical: f64, theoretical: f64, std_err: f64) -> f64 {
    let diff = empirical - theoretical;
    if std_err > 0.0 {
        diff / std_err
    } else if diff == 0.0 {
        0.0
    } else {
        f64::MAX.copysign(diff)
    }
}

/// Draws `replications` sorted samples and returns `(X_{k:n}, statistic)`
/// for each of `kinds`, in replication order.
fn draw(
    dist: &dyn DistributionModel,
    n: usize,
    k: usize,
    kinds: &[StatisticKind],
    replications: usize,
    seed: u64,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let chunks = replications.div_ceil(CHUNK);
    let per_chunk: Vec<(Vec<f64>, Vec<Vec<f64>>)> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = stream_rng(seed, chunk as u64);
            let size = CHUNK.min(replications - chunk * CHUNK);
            let mut conditioning = Vec::with_capacity(size);
            let mut stats = vec![Vec::with_capacity(size); kinds.len()];
            let mut sample = vec![0.0; n];
            for _ in 0..size {
                for slot in sample.iter_mut() {
                    let u: f64 = Open01.sample(&mut rng);
                    *slot = dist.quantile(u)?;
                }
                sample.sort_by(f64::total_cmp);
                conditioning.push(sample[k - 1]);
                for (kind, out) in kinds.iter().zip(stats.iter_mut()) {
                    out.push(kind.observe(&sample, k));
                }
            }
            Ok((conditioning, stats))
        })
        .collect::<Result<_>>()?;

    let mut conditioning = Vec::with_capacity(replications);
    let mut stats = vec![Vec::with_capacity(replications); kinds.len()];
    for (c, s) in per_chunk {
        conditioning.extend(c);
        for (all, part) in stats.iter_mut().zip(s) {
            all.extend(part);
        }
    }
    Ok((conditioning, stats))
}

/// Simulates the regression of `kind` on `X_{k:n}`; see
/// [`simulate_regressions`].
pub fn simulate_regression(
    dist: &dyn DistributionModel,
    n: usize,
    k: usize,
    kind: StatisticKind,
    replications: usize,
    seed: u64,
    bins: usize,
) -> Result<RegressionEstimate> {
    Ok(simulate_regressions(dist, n, k, &[kind], replications, seed, bins)?.remove(0))
}

/// Simulates several statistics from the same replications, so their
/// estimates share bin edges and counts. Deterministic given `seed`.
pub fn simulate_regressions(
    dist: &dyn DistributionModel,
    n: usize,
    k: usize,
    kinds: &[StatisticKind],
    replications: usize,
    seed: u64,
    bins: usize,
) -> Result<Vec<RegressionEstimate>> {
    OrderStatContext::new(n, k, 1)?;
    if kinds.is_empty() {
        return Err(invalid("kinds", "at least one statistic is required"));
    }
    for kind in kinds {
        kind.validate(n, k)?;
    }
    if bins < 1 {
        return Err(invalid("bins", "must be at least 1"));
    }
    if replications < MIN_BIN_COUNT * bins {
        return Err(Error::InsufficientData(format!(
            "{replications} replications cannot fill {bins} bins with {MIN_BIN_COUNT} points each"
        )));
    }

    let (conditioning, stats) = draw(dist, n, k, kinds, replications, seed)?;
    let mut order: Vec<usize> = (0..replications).collect();
    order.sort_by(|&a, &b| conditioning[a].total_cmp(&conditioning[b]).then(a.cmp(&b)));

    // Equal-count bins; the first `replications % bins` get one extra point.
    let base = replications / bins;
    let extra = replications % bins;
    let mut ranges = Vec::with_capacity(bins);
    let mut start = 0;
    for b in 0..bins {
        let len = base + usize::from(b < extra);
        ranges.push(start..start + len);
        start += len;
    }

    let mut bin_edges = Vec::with_capacity(bins + 1);
    bin_edges.push(conditioning[order[0]]);
    for range in &ranges[1..] {
        let lo = conditioning[order[range.start - 1]];
        let hi = conditioning[order[range.start]];
        bin_edges.push(0.5 * (lo + hi));
    }
    bin_edges.push(conditioning[order[replications - 1]]);

    let counts: Vec<usize> = ranges.iter().map(|r| r.len()).collect();
    let bin_centers: Vec<f64> = ranges
        .iter()
        .map(|r| order[r.clone()].iter().map(|&i| conditioning[i]).sum::<f64>() / r.len() as f64)
        .collect();

    kinds
        .iter()
        .zip(&stats)
        .map(|(kind, values)| {
            let (empirical_mean, std_err): (Vec<f64>, Vec<f64>) = ranges
                .iter()
                .map(|r| {
                    let m = r.len() as f64;
                    let mean = order[r.clone()].iter().map(|&i| values[i]).sum::<f64>() / m;
                    let ss = order[r.clone()].iter().map(|&i| (values[i] - mean).powi(2)).sum::<f64>();
                    (mean, (ss / (m - 1.0)).sqrt() / m.sqrt())
                })
                .unzip();
            let theoretical = bin_centers
                .par_iter()
                .map(|&x| kind.theoretical(dist, n, k, x))
                .collect::<Result<Vec<f64>>>()?;
            let z_scores = empirical_mean
                .iter()
                .zip(&theoretical)
                .zip(&std_err)
                .map(|((&e, &t), &s)| z_score(e, t, s))
                .collect();
            Ok(RegressionEstimate {
                bin_edges: bin_edges.clone(),
                bin_centers: bin_centers.clone(),
                counts: counts.clone(),
                empirical_mean,
                std_err,
                theoretical,
                z_scores,
            })
        })
        .collect()
}

/// Outcome of [`compare_report`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonSummary {
    pub passed: bool,
    /// Interior bins (edge bins excluded) that were scored.
    pub evaluated_bins: usize,
    pub pass_fraction: f64,
    pub z_threshold: f64,
    pub min_pass_fraction: f64,
    /// Indices of interior bins with `|z| > z_threshold`.
    pub failing_bins: Vec<usize>,
    pub max_abs_z: f64,
}

impl fmt::Display for ComparisonSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {:.1}% of {} interior bins within |z| <= {} (need {:.1}%), max |z| = {:.3}",
            if self.passed { "pass" } else { "fail" },
            100.0 * self.pass_fraction,
            self.evaluated_bins,
            self.z_threshold,
            100.0 * self.min_pass_fraction,
            self.max_abs_z
        )?;
        if !self.failing_bins.is_empty() {
            write!(f, "; failing bins {:?}", self.failing_bins)?;
        }
        Ok(())
    }
}

/// Passes iff at least `min_pass_fraction` of the interior bins have
/// `|z| <= z_threshold`. The lowest and highest bins are excluded when
/// there are more than two bins.
pub fn compare_report(estimate: &RegressionEstimate, z_threshold: f64, min_pass_fraction: f64) -> ComparisonSummary {
    let bins = estimate.z_scores.len();
    let interior = if bins > 2 { 1..bins - 1 } else { 0..bins };
    let evaluated_bins = interior.len();
    let mut failing_bins = Vec::new();
    let mut max_abs_z: f64 = 0.0;
    for i in interior {
        let z = estimate.z_scores[i].abs();
        if !(z <= z_threshold) {
            failing_bins.push(i);
        }
        max_abs_z = max_abs_z.max(if z.is_nan() { f64::INFINITY } else { z });
    }
    let pass_fraction = if evaluated_bins == 0 {
        0.0
    } else {
        (evaluated_bins - failing_bins.len()) as f64 / evaluated_bins as f64
    };
    ComparisonSummary {
        passed: evaluated_bins > 0 && pass_fraction >= min_pass_fraction,
        evaluated_bins,
        pass_fraction,
        z_threshold,
        min_pass_fraction,
        failing_bins,
        max_abs_z,
    }
}

/// Difference `a - b` of two estimates over the same bins: empirical and
/// theoretical means subtract, standard errors add in quadrature. Used to
/// check that two regressions coincide, e.g. the squared spacings below and
/// above the median of three draws from `t_3`.
pub fn paired_difference(a: &RegressionEstimate, b: &RegressionEstimate) -> Result<RegressionEstimate> {
    if a.bin_edges != b.bin_edges || a.counts != b.counts {
        return Err(invalid("estimates", "paired estimates must share bins"));
    }
    let sub = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| p - q).collect::<Vec<f64>>();
    let empirical_mean = sub(&a.empirical_mean, &b.empirical_mean);
    let theoretical = sub(&a.theoretical, &b.theoretical);
    let std_err: Vec<f64> = a.std_err.iter().zip(&b.std_err).map(|(p, q)| p.hypot(*q)).collect();
    let z_scores = empirical_mean
        .iter()
        .zip(&theoretical)
        .zip(&std_err)
        .map(|((&e, &t), &s)| z_score(e, t, s))
        .collect();
    Ok(RegressionEstimate {
        bin_edges: a.bin_edges.clone(),
        bin_centers: a.bin_centers.clone(),
        counts: a.counts.clone(),
        empirical_mean,
        std_err,
        theoretical,
        z_scores,
    })
}
