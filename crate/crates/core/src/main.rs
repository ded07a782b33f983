use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use uncertain_ts::fixtures::builtin_fixture;
use uncertain_ts::io::load_series;
use uncertain_ts::plot::emit_plots;
use uncertain_ts::report::{emit_report, render_forecast, run_until, ReportFormat, Stage};
use uncertain_ts::{AnalysisReport, CvMetric, PipelineConfig, ResidualSplit, TimeSeries};

/// Uncertain autoregressive time-series analysis.
#[derive(Parser)]
#[command(name = "uts", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rolling-window cross-validation for order selection.
    Cv(Opts),
    /// Fit the model and estimate the disturbance.
    Fit(Opts),
    /// Fit and run the uncertain hypothesis test.
    Test(Opts),
    /// One-step forecast with confidence interval.
    Forecast(Opts),
    /// Full pipeline report.
    Report(Opts),
    /// Run the full pipeline and write SVG plots.
    Plot(Opts),
}

#[derive(Args)]
struct Opts {
    /// CSV file with one `value` or `label,value` per row.
    #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
    input: Option<PathBuf>,
    /// Built-in dataset name.
    #[arg(long)]
    fixture: Option<String>,
    /// Use this order instead of cross-validating.
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, default_value_t = 10)]
    max_order: usize,
    #[arg(long = "train-len", default_value_t = 22)]
    train_len: usize,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    #[arg(long, default_value = "squared")]
    cv_metric: CvMetric,
    /// Residual ranges for the KS diagnostic, e.g. `1-29,17-70`.
    #[arg(long)]
    split: Option<ResidualSplit>,
    #[arg(long, default_value = "text")]
    format: ReportFormat,
    /// Output directory for plots.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Opts {
    fn series(&self) -> uncertain_ts::Result<TimeSeries> {
        match (&self.input, &self.fixture) {
            (Some(p), _) => load_series(p),
            (None, Some(name)) => builtin_fixture(name),
            (None, None) => unreachable!("clap requires one source"),
        }
    }

    fn config(&self) -> PipelineConfig {
        PipelineConfig {
            max_order: self.max_order,
            train_length: self.train_len,
            alpha: self.alpha,
            level: self.level,
            order_override: self.order,
            cv_metric: self.cv_metric,
            split: self.split.clone(),
        }
    }
}

fn run(cli: Cli) -> uncertain_ts::Result<AnalysisReport> {
    let (opts, stage) = match &cli.command {
        Command::Cv(o) => (o, Stage::Cv),
        Command::Fit(o) => (o, Stage::Fit),
        Command::Test(o) => (o, Stage::Test),
        Command::Forecast(o) | Command::Report(o) | Command::Plot(o) => (o, Stage::Forecast),
    };
    let series = opts.series()?;
    let report = run_until(&series, &opts.config(), stage)?;

    match &cli.command {
        Command::Plot(_) => {
            let dir = opts.out.clone().unwrap_or_else(|| PathBuf::from("."));
            for path in emit_plots(&report, &series, &dir)? {
                println!("{}", path.display());
            }
        }
        Command::Forecast(_) if opts.format == ReportFormat::Text => match &report.forecast {
            Some(f) => print!("{}", render_forecast(f)),
            None => print!("{}", emit_report(&report, ReportFormat::Text)?),
        },
        _ => {
            print!("{}", emit_report(&report, opts.format)?);
            if let Some(dir) = &opts.out {
                emit_plots(&report, &series, dir)?;
            }
        }
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(report) if report.rejected() => ExitCode::from(2),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
