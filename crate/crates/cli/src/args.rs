use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "tregress", version, about = "Order-statistic regression checks for Student's t and the Q-family")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Seed for every random stream.
    #[arg(long, default_value_t = 1, global = true)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate pdf, cdf, survival function or quantile at one point.
    Eval(EvalArgs),
    /// Draw an inverse-transform sample.
    Sample(SampleArgs),
    /// Residuals of a regression identity over a quantile-spaced grid.
    ResidualGrid(ResidualGridArgs),
    /// Residuals of the differential and integrated relations.
    OdeCheck(OdeCheckArgs),
    /// Monte Carlo check of a conditional regression.
    McVerify(McVerifyArgs),
    /// Least-squares fit of a Q-family member to a quantile function.
    FitLambda(FitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Student's t with `--nu`, `--mu`, `--sigma`.
    T,
    /// Unit-variance t with `--nu` > 2.
    Z,
    /// Q-family with `--q-lambda` (default `--lambda`), `--c`, `--d`.
    Qfamily,
    /// Normal with mean `--mu`, standard deviation `--sigma`.
    Normal,
    /// Unit exponential shifted to mean zero.
    Exponential,
    /// Uniform on [`--lower`, `--upper`].
    Uniform,
}

/// Distribution selection and parameters.
#[derive(Debug, Clone, Args)]
pub struct DistArgs {
    #[arg(long, value_enum, default_value_t = Family::T)]
    pub dist: Family,
    #[arg(long, default_value_t = 2.0)]
    pub nu: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub mu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Q-family shape; defaults to `--lambda`.
    #[arg(long)]
    pub q_lambda: Option<f64>,
    /// Q-family scale, also the constant of the Q-family differential equation.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub d: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub lower: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub upper: f64,
    /// Weight of the first-moment identity (and default Q-family shape).
    #[arg(long, default_value_t = 0.5)]
    pub lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Pdf,
    Cdf,
    Sf,
    Quantile,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub dist: DistArgs,
    /// Point of evaluation (a probability level for `quantile`).
    #[arg(long, allow_hyphen_values = true)]
    pub at: f64,
    #[arg(long, value_enum, default_value_t = Quantity::Pdf)]
    pub what: Quantity,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub dist: DistArgs,
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
}

/// Conditioning grid and verdict tolerance.
#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Number of quantile-spaced grid points.
    #[arg(long, default_value_t = 41)]
    pub points: usize,
    /// Grid spans probability levels [level-min, 1 - level-min].
    #[arg(long, default_value_t = 1e-4)]
    pub level_min: f64,
}

#[derive(Debug, Args)]
pub struct ResidualGridArgs {
    #[command(flatten)]
    pub dist: DistArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// 1: first-moment identity with weight `--lambda`; 2: second-moment
    /// identity with `--theorem-nu`.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub theorem: u8,
    /// Degrees of freedom of the second-moment identity; defaults to `--nu`.
    #[arg(long)]
    pub theorem_nu: Option<u32>,
    /// Moments of the second-moment identity are taken about this point;
    /// defaults to `--mu` for t models and 0 otherwise.
    #[arg(long, allow_hyphen_values = true)]
    pub center: Option<f64>,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OdeKind {
    /// `F^(2-lambda) (1-F)^(1+lambda) = c f` for the chosen distribution.
    Lemma1,
    /// Integrated relation of the unit-variance t density with `--nu`.
    Star,
    /// Finite-difference log-density slope of the unit-variance t density.
    LogSlope,
}

#[derive(Debug, Args)]
pub struct OdeCheckArgs {
    #[command(flatten)]
    pub dist: DistArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum)]
    pub check: OdeKind,
    /// Finite-difference step for `log-slope`.
    #[arg(long, default_value_t = 1e-4)]
    pub h: f64,
    /// Defaults: 1e-9 (lemma1), 1e-7 (star), 1e-6 (log-slope).
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Statistic {
    /// Sample mean.
    SampleMean,
    /// Average `(X_k - X_i)^r` over `i < k`.
    Below,
    /// Average `(X_j - X_k)^r` over `j > k`.
    Above,
    /// `lambda * below - (1 - lambda) * above` with `r = 1`.
    Weighted,
    /// Above minus below squared deviations (zero regression for t_3).
    Spacing,
}

#[derive(Debug, Args)]
pub struct McVerifyArgs {
    #[command(flatten)]
    pub dist: DistArgs,
    #[arg(long, value_enum, default_value_t = Statistic::SampleMean)]
    pub statistic: Statistic,
    /// Deviation power for `below` and `above`.
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 200_000)]
    pub replications: usize,
    #[arg(long, default_value_t = 42)]
    pub bins: usize,
    #[arg(long, default_value_t = 3.0)]
    pub z_threshold: f64,
    #[arg(long, default_value_t = 0.95)]
    pub min_pass_fraction: f64,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub dist: DistArgs,
    /// Fit at levels i / (levels + 1), i = 1..=levels.
    #[arg(long, default_value_t = 99)]
    pub levels: usize,
    #[arg(long, default_value_t = 0.5)]
    pub init_lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    pub init_c: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub init_d: f64,
}
