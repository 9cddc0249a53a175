//! Empirical multiplicative parameters of positive samples.
//!
//! Everything is computed on the log scale: `x̄_G = exp(mean ln x)`, geometric
//! variances are `exp` of the (biased or unbiased) variance of `ln x`, and the
//! geometric standard deviations are `exp` of the corresponding standard
//! deviation of `ln x`. Note that `geo_std != sqrt(geo_var)`.

use serde::Serialize;

use crate::error::{Error, Result};

/// An ordered, non-empty series of strictly positive observations.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v > 0.0) || !v.is_finite())
        {
            return Err(Error::NonPositive { index, value });
        }
        Ok(Sample { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.values
    }

    fn logs(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().map(|v| v.ln())
    }

    fn mean_log(&self) -> f64 {
        self.logs().sum::<f64>() / self.len() as f64
    }

    /// Sum of squared log deviations from the log-scale mean.
    fn log_ss(&self) -> f64 {
        let m = self.mean_log();
        self.logs().map(|l| (l - m) * (l - m)).sum()
    }
}

impl TryFrom<Vec<f64>> for Sample {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Sample::new(values)
    }
}

impl TryFrom<&[f64]> for Sample {
    type Error = Error;

    fn try_from(values: &[f64]) -> Result<Self> {
        Sample::new(values.to_vec())
    }
}

/// Normalization of the log-scale variance: `1/n` or `1/(n-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceMode {
    Biased,
    Unbiased,
}

impl VarianceMode {
    fn divisor(self, n: usize) -> Result<f64> {
        match self {
            VarianceMode::Biased => Ok(n as f64),
            VarianceMode::Unbiased if n >= 2 => Ok((n - 1) as f64),
            VarianceMode::Unbiased => Err(Error::domain(
                "unbiased geometric variance needs at least two observations",
            )),
        }
    }
}

/// Empirical geometric mean, `exp((1/n) Σ ln xᵢ)`.
pub fn geo_mean(s: &Sample) -> f64 {
    s.mean_log().exp()
}

/// Empirical geometric variance `exp((1/d) Σ ln²(xᵢ/x̄_G))` with `d = n` or `n - 1`.
pub fn geo_var(s: &Sample, mode: VarianceMode) -> Result<f64> {
    Ok((s.log_ss() / mode.divisor(s.len())?).exp())
}

/// Empirical geometric standard deviation `exp(sqrt((1/d) Σ ln²(xᵢ/x̄_G)))`.
pub fn geo_std(s: &Sample, mode: VarianceMode) -> Result<f64> {
    Ok((s.log_ss() / mode.divisor(s.len())?).sqrt().exp())
}

/// The k-th multiplicative interval `(m_G·σ_G^{-k}, m_G·σ_G^{k})`.
pub fn k_interval(m_g: f64, s_g: f64, k: u32) -> Result<(f64, f64)> {
    if !(m_g > 0.0) || !(s_g >= 1.0) || k == 0 {
        return Err(Error::domain(format!(
            "k-interval needs m_G > 0, s_G >= 1, k >= 1; got {m_g}, {s_g}, {k}"
        )));
    }
    let spread = s_g.powi(k as i32);
    Ok((m_g / spread, m_g * spread))
}

/// Additive-multiplicative covariance estimator
/// `exp((1/n) Σ (xᵢ - x̄)(ln yᵢ - mean ln y))`.
///
/// Additive in `xs` (any finite reals), multiplicative in `ys`.
pub fn addmult_cov(xs: &[f64], ys: &Sample) -> Result<f64> {
    let n = xs.len();
    if n != ys.len() {
        return Err(Error::LengthMismatch {
            left: n,
            right: ys.len(),
        });
    }
    if n < 2 {
        return Err(Error::domain("covariance needs at least two pairs"));
    }
    if let Some(bad) = xs.iter().find(|x| !x.is_finite()) {
        return Err(Error::domain(format!("non-finite regressor value {bad}")));
    }
    let nf = n as f64;
    let x_mean = xs.iter().sum::<f64>() / nf;
    let z_mean = ys.mean_log();
    let cov = xs
        .iter()
        .zip(ys.logs())
        .map(|(x, z)| (x - x_mean) * (z - z_mean))
        .sum::<f64>()
        / nf;
    Ok(cov.exp())
}

fn check_positive(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("divergence needs t > 0, got {t}")))
    }
}

/// Square multiplicative divergence of `t` from 1: `e^{ln² t}`.
pub fn mult_divergence(t: f64) -> Result<f64> {
    check_positive(t)?;
    let l = t.ln();
    Ok((l * l).exp())
}

/// Absolute multiplicative divergence `e^{|ln t|} = max(t, 1/t)`.
pub fn mult_abs_divergence(t: f64) -> Result<f64> {
    check_positive(t)?;
    Ok(t.ln().abs().exp())
}

/// Multiplicative and additive descriptive statistics of one sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplicativeSummary {
    pub n: usize,
    pub geo_mean: f64,
    pub geo_var_biased: f64,
    pub geo_var_unbiased: f64,
    pub geo_std_biased: f64,
    pub geo_std_unbiased: f64,
    pub arith_mean: f64,
    /// Sample standard deviation with the `n - 1` divisor.
    pub arith_std: f64,
    pub median: f64,
}

pub fn summarize(s: &Sample) -> Result<MultiplicativeSummary> {
    let n = s.len();
    if n < 2 {
        return Err(Error::domain("summary needs at least two observations"));
    }
    let arith_mean = arith_mean(s.values());
    let ss: f64 = s
        .values()
        .iter()
        .map(|v| (v - arith_mean) * (v - arith_mean))
        .sum();
    Ok(MultiplicativeSummary {
        n,
        geo_mean: geo_mean(s),
        geo_var_biased: geo_var(s, VarianceMode::Biased)?,
        geo_var_unbiased: geo_var(s, VarianceMode::Unbiased)?,
        geo_std_biased: geo_std(s, VarianceMode::Biased)?,
        geo_std_unbiased: geo_std(s, VarianceMode::Unbiased)?,
        arith_mean,
        arith_std: (ss / (n - 1) as f64).sqrt(),
        median: median(s.values()),
    })
}

pub(crate) fn arith_mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Middle order statistic; mean of the two central ones for even `n`.
pub fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}
