use std::fs;

use serde::Serialize;
use tregress::characterization::{
    lemma1_report, log_slope_report, quantile_grid, star_report, theorem1_report, theorem2_report,
    ResidualReport,
};
use tregress::distributions::{
    fit_qfamily, sample, DistributionModel, Normal, QFamily, QFamilyParams, ShiftedExponential,
    StandardizedT, StudentT, StudentTParams, Uniform,
};
use tregress::order_stats::OrderStatContext;
use tregress::simulation::{
    compare_report, paired_difference, simulate_regression, simulate_regressions, RegressionEstimate,
    StatisticKind,
};
use tregress::Error;

use crate::args::{
    Cli, Command, DistArgs, Family, FitArgs, Format, McVerifyArgs, OdeCheckArgs, OdeKind, Quantity,
    ResidualGridArgs, Statistic,
};
use crate::output::{format_f64, to_csv, to_json};

pub enum Outcome {
    Pass,
    Fail(String),
}

pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParameter { .. }
            | Error::Domain(_)
            | Error::MomentNotFinite { .. }
            | Error::DegenerateConditioning { .. }
            | Error::Rank(_)
            | Error::InsufficientData(_) => 2,
            Error::QuadratureNonConvergence { .. }
            | Error::Bracket { .. }
            | Error::MinimizeNonConvergence { .. }
            | Error::RouteMismatch { .. } => 1,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let (text, outcome) = match &cli.command {
        Command::Eval(a) => {
            let dist = build_dist(&a.dist)?;
            let value = match a.what {
                Quantity::Pdf => dist.pdf(a.at),
                Quantity::Cdf => dist.cdf(a.at),
                Quantity::Sf => dist.sf(a.at),
                Quantity::Quantile => dist.quantile(a.at)?,
            };
            let text = match cli.format {
                Format::Csv => format!("{}\n", format_f64(value)),
                Format::Json => json(&EvalReport {
                    at: a.at,
                    what: format!("{:?}", a.what).to_lowercase(),
                    value,
                })?,
            };
            (text, Outcome::Pass)
        }
        Command::Sample(a) => {
            let dist = build_dist(&a.dist)?;
            let samples = sample(dist.as_ref(), a.count, cli.seed)?;
            let text = match cli.format {
                Format::Csv => csv(&["x"], samples.iter().map(|&x| vec![format_f64(x)]))?,
                Format::Json => json(&SampleReport { samples })?,
            };
            (text, Outcome::Pass)
        }
        Command::ResidualGrid(a) => residual_report(residual_grid(a)?, cli.format)?,
        Command::OdeCheck(a) => residual_report(ode_check(a)?, cli.format)?,
        Command::McVerify(a) => mc_verify(a, cli)?,
        Command::FitLambda(a) => fit(a, cli.format)?,
    };
    match &cli.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::usage(format!("cannot write --out {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(outcome)
}

#[derive(Serialize)]
struct EvalReport {
    at: f64,
    what: String,
    value: f64,
}

#[derive(Serialize)]
struct SampleReport {
    samples: Vec<f64>,
}

fn json<T: Serialize>(value: &T) -> CliResult<String> {
    to_json(value).map_err(|e| CliError {
        code: 1,
        message: format!("JSON encoding failed: {e}"),
    })
}

fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<String> {
    to_csv(header, rows).map_err(|e| CliError {
        code: 1,
        message: format!("CSV encoding failed: {e}"),
    })
}

fn build_dist(a: &DistArgs) -> CliResult<Box<dyn DistributionModel>> {
    Ok(match a.dist {
        Family::T => Box::new(StudentT::new(StudentTParams::new(a.nu, a.mu, a.sigma)?)?),
        Family::Z => Box::new(StandardizedT::new(a.nu)?),
        Family::Qfamily => Box::new(QFamily::new(QFamilyParams::new(a.q_lambda.unwrap_or(a.lambda), a.c, a.d)?)?),
        Family::Normal => Box::new(Normal::new(a.mu, a.sigma)?),
        Family::Exponential => Box::new(ShiftedExponential),
        Family::Uniform => Box::new(Uniform::new(a.lower, a.upper)?),
    })
}

fn integer_nu(nu: f64, flag: &str) -> CliResult<u32> {
    if nu.fract() == 0.0 && (3.0..=1e6).contains(&nu) {
        Ok(nu as u32)
    } else {
        Err(CliError::usage(format!("invalid parameter `{flag}`: must be an integer >= 3, got {nu}")))
    }
}

fn residual_grid(a: &ResidualGridArgs) -> CliResult<ResidualReport> {
    let dist = build_dist(&a.dist)?;
    let ctx = OrderStatContext::new(a.n, a.k, 1)?;
    ctx.check_interior()?;
    let grid = quantile_grid(dist.as_ref(), a.grid.points, a.grid.level_min)?;
    Ok(match a.theorem {
        1 => theorem1_report(dist.as_ref(), a.dist.lambda, &ctx, &grid, a.tol)?,
        _ => {
            let nu = match a.theorem_nu {
                Some(nu) => integer_nu(nu as f64, "--theorem-nu")?,
                None => integer_nu(a.dist.nu, "--nu")?,
            };
            let center = a.center.unwrap_or(if a.dist.dist == Family::T { a.dist.mu } else { 0.0 });
            theorem2_report(dist.as_ref(), nu, &ctx, &grid, center, a.tol)?
        }
    })
}

fn ode_check(a: &OdeCheckArgs) -> CliResult<ResidualReport> {
    Ok(match a.check {
        OdeKind::Lemma1 => {
            let dist = build_dist(&a.dist)?;
            let grid = quantile_grid(dist.as_ref(), a.grid.points, a.grid.level_min)?;
            lemma1_report(dist.as_ref(), a.dist.lambda, a.dist.c, &grid, a.tol.unwrap_or(1e-9))?
        }
        OdeKind::Star | OdeKind::LogSlope => {
            let nu = integer_nu(a.dist.nu, "--nu")?;
            let z = StandardizedT::new(nu as f64)?;
            let grid = quantile_grid(&z, a.grid.points, a.grid.level_min)?;
            if a.check == OdeKind::Star {
                star_report(nu, &grid, a.tol.unwrap_or(1e-7))?
            } else {
                log_slope_report(nu, a.h, &grid, a.tol.unwrap_or(1e-6))?
            }
        }
    })
}

fn residual_report(report: ResidualReport, format: Format) -> CliResult<(String, Outcome)> {
    let text = match format {
        Format::Csv => csv(
            &["x", "lhs", "rhs", "delta"],
            (0..report.x_grid.len()).map(|i| {
                [report.x_grid[i], report.lhs[i], report.rhs[i], report.delta[i]]
                    .iter()
                    .map(|&v| format_f64(v))
                    .collect()
            }),
        )?,
        Format::Json => json(&report)?,
    };
    let outcome = if report.passed {
        Outcome::Pass
    } else {
        Outcome::Fail(format!(
            "max |delta| = {} exceeds tolerance {}",
            format_f64(report.max_abs_delta),
            report.tol
        ))
    };
    Ok((text, outcome))
}

fn mc_verify(a: &McVerifyArgs, cli: &Cli) -> CliResult<(String, Outcome)> {
    if !(a.z_threshold > 0.0) {
        return Err(CliError::usage("invalid parameter `--z-threshold`: must be positive"));
    }
    if !(0.0..=1.0).contains(&a.min_pass_fraction) {
        return Err(CliError::usage("invalid parameter `--min-pass-fraction`: must lie in [0, 1]"));
    }
    let dist = build_dist(&a.dist)?;
    let single = |kind| simulate_regression(dist.as_ref(), a.n, a.k, kind, a.replications, cli.seed, a.bins);
    let estimate: RegressionEstimate = match a.statistic {
        Statistic::SampleMean => single(StatisticKind::SampleMean)?,
        Statistic::Below => single(StatisticKind::BelowAvgDeviation(a.r))?,
        Statistic::Above => single(StatisticKind::AboveAvgDeviation(a.r))?,
        Statistic::Weighted => single(StatisticKind::WeightedTheorem1(a.dist.lambda))?,
        Statistic::Spacing => {
            let kinds = [StatisticKind::AboveAvgDeviation(2), StatisticKind::BelowAvgDeviation(2)];
            let pair = simulate_regressions(dist.as_ref(), a.n, a.k, &kinds, a.replications, cli.seed, a.bins)?;
            paired_difference(&pair[0], &pair[1])?
        }
    };
    let summary = compare_report(&estimate, a.z_threshold, a.min_pass_fraction);
    eprintln!("{summary}");
    let text = match cli.format {
        Format::Csv => csv(
            &["x", "lhs", "rhs", "delta"],
            (0..estimate.counts.len()).map(|i| {
                let (e, t) = (estimate.empirical_mean[i], estimate.theoretical[i]);
                [estimate.bin_centers[i], e, t, e - t].iter().map(|&v| format_f64(v)).collect()
            }),
        )?,
        Format::Json => json(&estimate)?,
    };
    let outcome = if summary.passed {
        Outcome::Pass
    } else {
        Outcome::Fail(summary.to_string())
    };
    Ok((text, outcome))
}

fn fit(a: &FitArgs, format: Format) -> CliResult<(String, Outcome)> {
    if a.levels < 5 {
        return Err(CliError::usage(format!("invalid parameter `--levels`: need at least 5, got {}", a.levels)));
    }
    let dist = build_dist(&a.dist)?;
    let levels: Vec<f64> = (1..=a.levels).map(|i| i as f64 / (a.levels + 1) as f64).collect();
    let initial = QFamilyParams::new(a.init_lambda, a.init_c, a.init_d)?;
    let result = fit_qfamily(dist.as_ref(), &levels, initial)?;
    let text = match format {
        Format::Csv => csv(
            &["lambda", "c", "d", "objective"],
            [[result.params.lambda, result.params.c, result.params.d, result.objective]
                .iter()
                .map(|&v| format_f64(v))
                .collect()],
        )?,
        Format::Json => json(&result)?,
    };
    Ok((text, Outcome::Pass))
}
