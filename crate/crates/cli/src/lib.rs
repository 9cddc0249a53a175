//! Command-line front end for the `mstat` library.
//!
//! Commands print JSON (or a flattened table) on stdout. Exit codes: 0 on
//! success, 2 for bad input or parameters, 3 when a Monte Carlo check misses
//! its tolerance.

pub mod commands;
pub mod data;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use data::{parse_csv, parse_csv_bytes, DataTable, Row, Schema};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{origin}, line {line}: {msg}")]
    Parse {
        origin: String,
        line: u64,
        msg: String,
    },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Stat(#[from] mstat::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// What a command wants printed and the status to exit with.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub status: i32,
}

#[derive(Debug, Parser)]
#[command(name = "mstat", version, about = "Multiplicative statistics toolkit")]
pub struct Cli {
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "table")]
    pub json: bool,
    /// Emit `key<TAB>value` lines rounded to 4 decimals.
    #[arg(long, global = true)]
    pub table: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multiplicative summary of a `year,value` file.
    Describe { file: PathBuf },
    /// Horizon report and forecast for a `year,rate` file.
    Returns {
        file: PathBuf,
        /// Rates are given in percent.
        #[arg(long)]
        percent: bool,
        /// k-interval multipliers.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        k: Vec<u32>,
        /// Training window `FIRST:LAST`.
        #[arg(long)]
        train: Option<String>,
        /// Forecast horizon in years; defaults to the years left after the window.
        #[arg(long)]
        horizon: Option<u32>,
    },
    /// Exponential trend fit of a `year,value` file.
    Trend {
        file: PathBuf,
        /// Value of t for the first year.
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        t_origin: i32,
        #[arg(long, default_value_t = mstat::regress::DEFAULT_BINS)]
        bins: usize,
    },
    /// Closed-form parameters of a distribution.
    Dist {
        family: Family,
        #[command(flatten)]
        params: DistParams,
        /// Also integrate numerically and report the deviation.
        #[arg(long)]
        numeric_check: bool,
    },
    /// Pareto law matched to an exponential, with tail crossings.
    Match {
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        /// Scan range `LO:HI` for crossings.
        #[arg(long, default_value = "1:100")]
        scan: String,
        /// Points in the emitted tail series.
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Monte Carlo verification of an estimator property.
    Mc {
        check: McCheck,
        #[arg(long = "dist")]
        family: Family,
        #[command(flatten)]
        params: DistParams,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use the 1/n geometric variance (geo-var-unbiased only).
        #[arg(long)]
        biased: bool,
    },
    /// CSV series behind the figures.
    Plotdata {
        #[arg(long)]
        figure: u8,
        /// Exponential rate for figure 2.
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        lambda: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Lognormal,
    Exponential,
    #[value(alias = "truncated_exponential", alias = "trunc-exp")]
    TruncatedExponential,
    Pareto,
    Uniform,
    Power,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum McCheck {
    GeoMeanUnbiased,
    DgOfMean,
    GeoVarUnbiased,
    /// Superadditivity and dispersion inequalities on paired samples.
    Inequalities,
}

#[derive(Debug, Clone, Copy, Default, Args)]
pub struct DistParams {
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    use commands::*;
    let (value, status) = match &cli.command {
        Command::Describe { file } => (cmd_describe(file)?, 0),
        Command::Returns {
            file,
            percent,
            k,
            train,
            horizon,
        } => (
            cmd_returns(file, *percent, k, train.as_deref(), *horizon)?,
            0,
        ),
        Command::Trend {
            file,
            t_origin,
            bins,
        } => (cmd_trend(file, *t_origin, *bins)?, 0),
        Command::Dist {
            family,
            params,
            numeric_check,
        } => (cmd_dist(*family, params, *numeric_check)?, 0),
        Command::Match {
            lambda,
            scan,
            points,
        } => (cmd_match(*lambda, scan, *points)?, 0),
        Command::Mc {
            check,
            family,
            params,
            n,
            reps,
            seed,
            biased,
        } => {
            let dist = build_dist(*family, params)?;
            cmd_mc(*check, dist, *n, *reps, *seed, *biased)?
        }
        Command::Plotdata { figure, lambda } => {
            return Ok(Outcome {
                stdout: cmd_plotdata(*figure, *lambda)?,
                status: 0,
            })
        }
    };
    let stdout = if cli.table {
        output::render_table(&value)
    } else {
        let mut s =
            serde_json::to_string_pretty(&value).map_err(|e| CliError::Invalid(e.to_string()))?;
        s.push('\n');
        s
    };
    Ok(Outcome { stdout, status })
}

pub use commands::build_dist;
