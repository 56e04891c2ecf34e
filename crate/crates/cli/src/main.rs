use std::path::PathBuf;
use std::process::ExitCode;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};
use sharpe_core::aggregation::sample_autocorrelation;
use sharpe_core::mc::{validate_aggregation, validate_crb, validate_sr_distribution, SimConfig};
use sharpe_core::sharpe::{analyze, PlugIn, QuantileSource, ReportOptions, SdFormula};
use sharpe_core::specfun::k_n;
use sharpe_core::tables::{self, Table};
use sharpe_core::{ReturnSeries, SharpeReport};

mod input;
mod render;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error(transparent)]
    Core(#[from] sharpe_core::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use sharpe_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } | CliError::Parse { .. } => 3,
            CliError::Core(E::Numeric { .. }) => 5,
            CliError::Core(_) => 4,
        }
    }
}

/// Core domain errors raised while checking flags are usage errors.
fn flag_error(e: sharpe_core::Error) -> CliError {
    match e {
        sharpe_core::Error::Numeric { .. } => CliError::Core(e),
        other => CliError::Usage(other.to_string()),
    }
}

/// Sharpe ratio statistics with exact small-sample inference.
#[derive(Parser)]
#[command(name = "sharpe", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the Sharpe ratio of a returns file with confidence intervals.
    Analyze(AnalyzeArgs),
    /// Print a table of bias factors, standard deviations or AR(1) scaling factors.
    Table(TableArgs),
    /// Run a seeded Monte Carlo check of the closed forms.
    #[command(subcommand)]
    Mc(McCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Exact,
    Asym1,
    Asym2,
    Asym3,
}

#[derive(Clone, Copy, ValueEnum)]
enum QuantileArg {
    T,
    Normal,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlugInArg {
    Raw,
    Debiased,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// CSV with a `return` column or `date,return` columns; `#` starts a comment.
    file: PathBuf,
    /// Per-period risk-free rate, same units as the returns.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    rf: f64,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Interval to highlight; asymN also picks the asymptotic formula.
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    method: Method,
    /// Critical value for asymptotic intervals.
    #[arg(long, value_enum, default_value_t = QuantileArg::T)]
    quantile: QuantileArg,
    /// Sharpe ratio plugged into the asymptotic standard deviations.
    #[arg(long, value_enum, default_value_t = PlugInArg::Raw)]
    plug_in: PlugInArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableKind {
    Bias,
    Variance,
    VarianceDiff,
    Compounding,
    SqrtDeviation,
}

#[derive(Args)]
struct TableArgs {
    #[arg(value_enum)]
    kind: TableKind,
    /// Standard deviation formula: 1, 2, 3 or 3c (3 with the small-sample correction).
    #[arg(long, default_value = "3")]
    variant: String,
    /// Formulas compared by variance-diff, as `a,b` for 100 (sd_a - sd_b).
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    pair: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    n_grid: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    sr_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    rho_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    q_grid: Option<Vec<u32>>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum McCommand {
    /// Law of sqrt(n) SR_hat against the non-central t, bias and variance.
    Distribution(McArgs),
    /// Covariance of (SR_hat, v_hat) against the Cramer-Rao bound.
    Crb(McArgs),
    /// q-period over one-period Sharpe ratio on a long AR(1) path.
    Aggregation(McArgs),
}

#[derive(Args)]
struct McArgs {
    /// Path length (defaults: 12, 250 and 1000000).
    #[arg(long)]
    n: Option<u32>,
    /// Per-period Sharpe ratio (defaults: 1, 1 and 0.25).
    #[arg(long, allow_hyphen_values = true)]
    sr: Option<f64>,
    /// Replications (defaults: 100000, 100000 and 1).
    #[arg(long)]
    reps: Option<u32>,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// AR(1) coefficient, aggregation only (default 0).
    #[arg(long, allow_hyphen_values = true)]
    rho: Option<f64>,
    /// Horizon, aggregation only (default 12).
    #[arg(long)]
    q: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

/// A report plus the extras shown by `analyze`.
pub struct Analysis {
    pub report: SharpeReport,
    pub k_n: Option<f64>,
    pub lag1: Option<f64>,
    pub span: Option<(NaiveDate, NaiveDate)>,
    pub method_label: &'static str,
    pub asymptotic_label: &'static str,
    pub quantile_label: &'static str,
}

fn run_analyze(args: &AnalyzeArgs) -> Result<String, CliError> {
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        return Err(CliError::Usage(format!(
            "--alpha {} must lie in (0, 1)",
            args.alpha
        )));
    }
    let file = input::read_returns(&args.file)?;
    let span = file
        .dates
        .as_ref()
        .and_then(|d| Some((*d.first()?, *d.last()?)));
    let series = ReturnSeries::new(file.returns, args.rf)?;
    let (formula, asymptotic_label) = match args.method {
        Method::Asym1 => (SdFormula::Iid1, "asym1"),
        Method::Asym2 => (SdFormula::Iid2, "asym2"),
        Method::Asym3 | Method::Exact => (SdFormula::Iid3, "asym3"),
    };
    let (quantile, quantile_label) = match args.quantile {
        QuantileArg::T => (QuantileSource::StudentT, "t"),
        QuantileArg::Normal => (QuantileSource::Normal, "normal"),
    };
    let plug_in = match args.plug_in {
        PlugInArg::Raw => PlugIn::Raw,
        PlugInArg::Debiased => PlugIn::Debiased,
    };
    let report = analyze(
        &series,
        ReportOptions {
            alpha: args.alpha,
            formula,
            quantile,
            plug_in,
        },
    )?;
    let n = report.estimate.n;
    let analysis = Analysis {
        k_n: k_n(n).ok(),
        lag1: sample_autocorrelation(series.returns(), 1).ok(),
        span,
        method_label: if args.method == Method::Exact {
            "exact"
        } else {
            asymptotic_label
        },
        asymptotic_label,
        quantile_label,
        report,
    };
    Ok(match args.format {
        Format::Text => render::analysis_text(&analysis),
        Format::Csv => render::analysis_csv(&analysis),
    })
}

fn parse_variant(s: &str) -> Result<SdFormula, CliError> {
    match s.trim() {
        "1" => Ok(SdFormula::Iid1),
        "2" => Ok(SdFormula::Iid2),
        "3" => Ok(SdFormula::Iid3),
        "3c" => Ok(SdFormula::Iid3Corrected),
        other => Err(CliError::Usage(format!(
            "unknown variant `{other}`, expected 1, 2, 3 or 3c"
        ))),
    }
}

fn non_empty<T: Clone>(
    name: &str,
    grid: &Option<Vec<T>>,
    default: &[T],
) -> Result<Vec<T>, CliError> {
    match grid {
        Some(g) if g.is_empty() => Err(CliError::Usage(format!("--{name} must not be empty"))),
        Some(g) => Ok(g.clone()),
        None => Ok(default.to_vec()),
    }
}

fn build_table(args: &TableArgs) -> Result<Table, CliError> {
    let ns = |default: &[u32]| non_empty("n-grid", &args.n_grid, default);
    let srs = || non_empty("sr-grid", &args.sr_grid, &tables::default_sr_grid());
    let rhos = || non_empty("rho-grid", &args.rho_grid, &tables::default_rho_grid());
    let qs = || non_empty("q-grid", &args.q_grid, &tables::HORIZONS);
    let table = match args.kind {
        TableKind::Bias => tables::bias_table(&ns(&tables::BIAS_N)?),
        TableKind::Variance => tables::variance_table(
            parse_variant(&args.variant)?,
            &srs()?,
            &ns(&tables::VARIANCE_N)?,
        ),
        TableKind::VarianceDiff => {
            let [a, b] = args.pair.as_slice() else {
                return Err(CliError::Usage(
                    "--pair takes exactly two variants, e.g. 2,3".into(),
                ));
            };
            let pair = (parse_variant(a)?, parse_variant(b)?);
            tables::variance_diff_table(pair, &srs()?, &ns(&tables::VARIANCE_N)?)
        }
        TableKind::Compounding => tables::compounding_table(&rhos()?, &qs()?),
        TableKind::SqrtDeviation => tables::sqrt_deviation_table(&rhos()?, &qs()?),
    };
    table.map_err(flag_error)
}

fn run_table(args: &TableArgs) -> Result<String, CliError> {
    let table = build_table(args)?;
    Ok(match args.format {
        Format::Text => render::table_text(&table),
        Format::Csv => render::table_csv(&table),
    })
}

fn run_mc(cmd: &McCommand) -> Result<(String, bool), CliError> {
    let (args, name) = match cmd {
        McCommand::Distribution(a) => (a, "distribution"),
        McCommand::Crb(a) => (a, "crb"),
        McCommand::Aggregation(a) => (a, "aggregation"),
    };
    let aggregation = matches!(cmd, McCommand::Aggregation(_));
    if !aggregation && (args.rho.is_some() || args.q.is_some()) {
        return Err(CliError::Usage(format!(
            "--rho and --q apply to `mc aggregation` only, not `mc {name}`"
        )));
    }
    let (n, sr, reps) = match cmd {
        McCommand::Distribution(_) => (12, 1.0, 100_000),
        McCommand::Crb(_) => (250, 1.0, 100_000),
        McCommand::Aggregation(_) => (1_000_000, 0.25, 1),
    };
    let n = args.n.unwrap_or(n);
    let sr = args.sr.unwrap_or(sr);
    let reps = args.reps.unwrap_or(reps);
    let mut config = SimConfig::iid(n, reps, sr, args.seed);
    let report = if aggregation {
        let rho = args.rho.unwrap_or(0.0);
        if rho.is_nan() || rho.abs() >= 1.0 {
            return Err(CliError::Usage(format!(
                "--rho {rho} must satisfy |rho| < 1"
            )));
        }
        config.rho = Some(rho);
        // --sr is measured against the stationary volatility
        config.mu = sr / (1.0 - rho * rho).sqrt();
        validate_aggregation(&config, args.q.unwrap_or(12))
    } else if matches!(cmd, McCommand::Distribution(_)) {
        validate_sr_distribution(&config)
    } else {
        validate_crb(&config)
    }
    .map_err(flag_error)?;
    let mut title = format!("mc {name}: n={n} sr={sr} reps={reps} seed={}", args.seed);
    if aggregation {
        title += &format!(
            " rho={} q={}",
            config.rho.unwrap_or(0.0),
            args.q.unwrap_or(12)
        );
    }
    let text = match args.format {
        Format::Text => render::mc_text(&title, &report),
        Format::Csv => render::mc_csv(&report),
    };
    Ok((text, report.passed()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Analyze(a) => run_analyze(a).map(|s| (s, true)),
        Command::Table(a) => run_table(a).map(|s| (s, true)),
        Command::Mc(c) => run_mc(c),
    };
    match outcome {
        Ok((out, passed)) => {
            print!("{out}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
