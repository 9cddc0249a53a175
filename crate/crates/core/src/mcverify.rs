//! Monte Carlo checks of the multiplicative estimator results: the geometric
//! mean is multiplicatively unbiased, `D_G` of the geometric mean is
//! `D_G(X)^{1/n}`, and the `n - 1` geometric variance is multiplicatively
//! unbiased for `D_G(X)`.
//!
//! Replicate `i` draws from its own stream seeded by mixing `i` into the
//! master seed, and all reductions run in replicate order, so a report is a
//! pure function of its [`McConfig`].

use serde::Serialize;

use crate::distlib::{sample, DistributionSpec};
use crate::error::{Error, Result};
use crate::mparams::{geo_mean, geo_std, geo_var, Sample, VarianceMode};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McConfig {
    pub dist: DistributionSpec,
    /// Sample size per replicate.
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McReport {
    pub estimate: f64,
    pub target: f64,
    pub relative_error: f64,
    pub reps_used: usize,
}

impl McReport {
    fn new(estimate: f64, target: f64, reps_used: usize) -> Self {
        McReport {
            estimate,
            target,
            relative_error: (estimate - target).abs() / target.abs(),
            reps_used,
        }
    }
}

/// The verifiable estimator properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    GeoMeanUnbiased,
    DgOfMean,
    GeoVarUnbiased,
}

impl Check {
    /// Relative tolerance the check is held to.
    pub fn tolerance(self) -> f64 {
        match self {
            Check::GeoMeanUnbiased => 0.01,
            Check::DgOfMean | Check::GeoVarUnbiased => 0.02,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Check::GeoMeanUnbiased => "geo-mean-unbiased",
            Check::DgOfMean => "dg-of-mean",
            Check::GeoVarUnbiased => "geo-var-unbiased",
        }
    }
}

impl std::str::FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geo-mean-unbiased" => Ok(Check::GeoMeanUnbiased),
            "dg-of-mean" => Ok(Check::DgOfMean),
            "geo-var-unbiased" => Ok(Check::GeoVarUnbiased),
            other => Err(Error::domain(format!("unknown check {other:?}"))),
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replicate `index` under master seed `seed`.
pub fn replicate_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

fn validate(cfg: &McConfig, min_n: usize) -> Result<()> {
    cfg.dist.validate()?;
    if cfg.n < min_n {
        return Err(Error::domain(format!(
            "sample size must be at least {min_n}, got {}",
            cfg.n
        )));
    }
    if cfg.reps == 0 {
        return Err(Error::domain("replicate count must be positive"));
    }
    Ok(())
}

/// Evaluates `stat` on each replicate's sample, in replicate order.
fn replicate<F>(cfg: &McConfig, stat: F) -> Result<Vec<f64>>
where
    F: Fn(&Sample) -> Result<f64> + Sync + Send,
{
    let run = |i: usize| {
        let s = sample(&cfg.dist, cfg.n, replicate_seed(cfg.seed, i as u64))?;
        stat(&s)
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..cfg.reps).into_par_iter().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..cfg.reps).map(run).collect()
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// `exp(mean ln x̄_G)` over replicates, against the closed-form `E_G(X)`.
pub fn check_geo_mean_unbiased(cfg: &McConfig) -> Result<McReport> {
    validate(cfg, 1)?;
    let target = cfg.dist.params()?.geo_mean;
    let logs = replicate(cfg, |s| Ok(geo_mean(s).ln()))?;
    Ok(McReport::new(mean(&logs).exp(), target, cfg.reps))
}

/// `exp(var ln x̄_G)` over replicates, against `D_G(X)^{1/n}`.
pub fn check_dg_of_geo_mean(cfg: &McConfig) -> Result<McReport> {
    validate(cfg, 1)?;
    let target = cfg.dist.params()?.geo_var.powf(1.0 / cfg.n as f64);
    let logs = replicate(cfg, |s| Ok(geo_mean(s).ln()))?;
    let m = mean(&logs);
    let ss: f64 = logs.iter().map(|l| (l - m) * (l - m)).sum();
    let var = ss / (cfg.reps.max(2) - 1) as f64;
    Ok(McReport::new(var.exp(), target, cfg.reps))
}

/// `exp(mean ln s²_G)` over replicates. The unbiased form targets `D_G(X)`;
/// the biased form targets `D_G(X)^{(n-1)/n}`, the value it converges to in
/// multiplicative expectation.
pub fn check_geo_var_unbiased(cfg: &McConfig, mode: VarianceMode) -> Result<McReport> {
    validate(cfg, 2)?;
    let dg = cfg.dist.params()?.geo_var;
    let target = match mode {
        VarianceMode::Unbiased => dg,
        VarianceMode::Biased => dg.powf((cfg.n - 1) as f64 / cfg.n as f64),
    };
    let logs = replicate(cfg, |s| Ok(geo_var(s, mode)?.ln()))?;
    Ok(McReport::new(mean(&logs).exp(), target, cfg.reps))
}

pub fn run_check(check: Check, cfg: &McConfig) -> Result<McReport> {
    match check {
        Check::GeoMeanUnbiased => check_geo_mean_unbiased(cfg),
        Check::DgOfMean => check_dg_of_geo_mean(cfg),
        Check::GeoVarUnbiased => check_geo_var_unbiased(cfg, VarianceMode::Unbiased),
    }
}

const SLACK: f64 = 1e-12;

/// Relative margin of `x̄_G(x + y) >= x̄_G(x) + x̄_G(y)`; negative means violated.
pub fn superadditivity_margin(x: &Sample, y: &Sample) -> Result<f64> {
    let sum = elementwise_sum(x, y)?;
    let rhs = geo_mean(x) + geo_mean(y);
    Ok((geo_mean(&sum) - rhs) / rhs)
}

/// Relative margin of `s_G(x)·s_G(y) >= s_G(x + y)`; negative means violated.
pub fn gdisp_margin(x: &Sample, y: &Sample) -> Result<f64> {
    let sum = elementwise_sum(x, y)?;
    let rhs = geo_std(&sum, VarianceMode::Biased)?;
    let lhs = geo_std(x, VarianceMode::Biased)? * geo_std(y, VarianceMode::Biased)?;
    Ok((lhs - rhs) / rhs)
}

fn elementwise_sum(x: &Sample, y: &Sample) -> Result<Sample> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Sample::new(
        x.values()
            .iter()
            .zip(y.values())
            .map(|(a, b)| a + b)
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityScan {
    pub trials: usize,
    pub violations_superadd: usize,
    pub violations_gdisp: usize,
    /// Smallest observed relative margin of each inequality, in the order
    /// (superadditivity, dispersion).
    pub worst_margins: Vec<f64>,
}

/// Draws `trials` pairs of independent samples of size `n` and counts
/// violations of the superadditivity of the geometric mean and of
/// `s_G(x)·s_G(y) >= s_G(x + y)` beyond a `1e-12` relative slack.
pub fn scan_inequalities(
    dist_x: &DistributionSpec,
    dist_y: &DistributionSpec,
    trials: usize,
    n: usize,
    seed: u64,
) -> Result<InequalityScan> {
    if trials == 0 || n == 0 {
        return Err(Error::domain("trials and sample size must be positive"));
    }
    let mut scan = InequalityScan {
        trials,
        violations_superadd: 0,
        violations_gdisp: 0,
        worst_margins: vec![f64::INFINITY, f64::INFINITY],
    };
    for t in 0..trials as u64 {
        let x = sample(dist_x, n, replicate_seed(seed, 2 * t))?;
        let y = sample(dist_y, n, replicate_seed(seed, 2 * t + 1))?;
        let sa = superadditivity_margin(&x, &y)?;
        let gd = gdisp_margin(&x, &y)?;
        if sa < -SLACK {
            scan.violations_superadd += 1;
        }
        if gd < -SLACK {
            scan.violations_gdisp += 1;
        }
        scan.worst_margins[0] = scan.worst_margins[0].min(sa);
        scan.worst_margins[1] = scan.worst_margins[1].min(gd);
    }
    Ok(scan)
}
