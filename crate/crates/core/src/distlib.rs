//! Additive and multiplicative parameters of the lognormal, exponential,
//! left-truncated exponential, Pareto, uniform and power families, plus
//! tails, exponential/Pareto matching and seeded inverse-cdf samplers.

use std::f64::consts::{LN_2, PI};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::mparams::Sample;
use crate::specfun::{e1_scaled, euler_gamma, find_root, integrate, QuadratureSpec};

/// A parametric family together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DistributionSpec {
    /// `ln X ~ N(m, sigma²)`.
    Lognormal {
        m: f64,
        sigma: f64,
    },
    Exponential {
        lambda: f64,
    },
    /// Exponential shifted to start at `mu >= 0`.
    TruncatedExponential {
        lambda: f64,
        mu: f64,
    },
    /// Support `[beta, ∞)`, tail `(beta/x)^alpha`.
    Pareto {
        alpha: f64,
        beta: f64,
    },
    Uniform {
        a: f64,
        b: f64,
    },
    /// Density `alpha·x^{alpha-1}/b^alpha` on `[0, b]`.
    Power {
        alpha: f64,
        b: f64,
    },
}

fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::domain(what.to_string()))
    }
}

fn finite(v: f64) -> bool {
    v.is_finite()
}

impl DistributionSpec {
    pub fn lognormal(m: f64, sigma: f64) -> Result<Self> {
        let d = DistributionSpec::Lognormal { m, sigma };
        d.validate()?;
        Ok(d)
    }

    pub fn exponential(lambda: f64) -> Result<Self> {
        let d = DistributionSpec::Exponential { lambda };
        d.validate()?;
        Ok(d)
    }

    pub fn truncated_exponential(lambda: f64, mu: f64) -> Result<Self> {
        let d = DistributionSpec::TruncatedExponential { lambda, mu };
        d.validate()?;
        Ok(d)
    }

    pub fn pareto(alpha: f64, beta: f64) -> Result<Self> {
        let d = DistributionSpec::Pareto { alpha, beta };
        d.validate()?;
        Ok(d)
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        let d = DistributionSpec::Uniform { a, b };
        d.validate()?;
        Ok(d)
    }

    pub fn power(alpha: f64, b: f64) -> Result<Self> {
        let d = DistributionSpec::Power { alpha, b };
        d.validate()?;
        Ok(d)
    }

    pub fn family(&self) -> &'static str {
        match self {
            DistributionSpec::Lognormal { .. } => "lognormal",
            DistributionSpec::Exponential { .. } => "exponential",
            DistributionSpec::TruncatedExponential { .. } => "truncated_exponential",
            DistributionSpec::Pareto { .. } => "pareto",
            DistributionSpec::Uniform { .. } => "uniform",
            DistributionSpec::Power { .. } => "power",
        }
    }

    /// Checks the parameter constraints of the family.
    pub fn validate(&self) -> Result<()> {
        match *self {
            DistributionSpec::Lognormal { m, sigma } => {
                require(finite(m), "lognormal m must be finite")?;
                require(finite(sigma) && sigma > 0.0, "lognormal sigma must be > 0")
            }
            DistributionSpec::Exponential { lambda } => require(
                finite(lambda) && lambda > 0.0,
                "exponential lambda must be > 0",
            ),
            DistributionSpec::TruncatedExponential { lambda, mu } => {
                require(
                    finite(lambda) && lambda > 0.0,
                    "truncated exponential lambda must be > 0",
                )?;
                require(
                    finite(mu) && mu >= 0.0,
                    "truncated exponential mu must be >= 0 for multiplicative parameters to exist",
                )
            }
            DistributionSpec::Pareto { alpha, beta } => {
                require(finite(alpha) && alpha > 0.0, "pareto alpha must be > 0")?;
                require(finite(beta) && beta > 0.0, "pareto beta must be > 0")
            }
            DistributionSpec::Uniform { a, b } => {
                require(finite(a) && a >= 0.0, "uniform a must be >= 0")?;
                require(finite(b) && b > a, "uniform b must be > a")
            }
            DistributionSpec::Power { alpha, b } => {
                require(finite(alpha) && alpha > 1.0, "power alpha must be > 1")?;
                require(finite(b) && b > 0.0, "power b must be > 0")
            }
        }
    }

    /// Closed-form parameter set of the family.
    pub fn params(&self) -> Result<ParamSet> {
        match *self {
            DistributionSpec::Lognormal { m, sigma } => lognormal_params(m, sigma),
            DistributionSpec::Exponential { lambda } => exponential_params(lambda),
            DistributionSpec::TruncatedExponential { lambda, mu } => trunc_exp_params(lambda, mu),
            DistributionSpec::Pareto { alpha, beta } => pareto_params(alpha, beta),
            DistributionSpec::Uniform { a, b } => uniform_params(a, b),
            DistributionSpec::Power { alpha, b } => power_params(alpha, b),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        1.0 - self.tail(x)
    }

    /// Survival function `1 - F(x)`; 1 below the support.
    pub fn tail(&self, x: f64) -> f64 {
        match *self {
            DistributionSpec::Lognormal { m, sigma } => {
                if x <= 0.0 {
                    1.0
                } else {
                    0.5 * erfc((x.ln() - m) / (sigma * std::f64::consts::SQRT_2))
                }
            }
            DistributionSpec::Exponential { lambda } => {
                if x <= 0.0 {
                    1.0
                } else {
                    (-lambda * x).exp()
                }
            }
            DistributionSpec::TruncatedExponential { lambda, mu } => {
                if x <= mu {
                    1.0
                } else {
                    (-lambda * (x - mu)).exp()
                }
            }
            DistributionSpec::Pareto { alpha, beta } => {
                if x <= beta {
                    1.0
                } else {
                    (beta / x).powf(alpha)
                }
            }
            DistributionSpec::Uniform { a, b } => {
                if x <= a {
                    1.0
                } else if x >= b {
                    0.0
                } else {
                    (b - x) / (b - a)
                }
            }
            DistributionSpec::Power { alpha, b } => {
                if x <= 0.0 {
                    1.0
                } else if x >= b {
                    0.0
                } else {
                    1.0 - (x / b).powf(alpha)
                }
            }
        }
    }

    /// Inverse cdf evaluated at `1 - u` (or `u` where the family is symmetric
    /// in that choice); `u` must lie in the open unit interval.
    fn draw(&self, u: f64, normal: &Normal) -> f64 {
        match *self {
            DistributionSpec::Lognormal { m, sigma } => (m + sigma * normal.inverse_cdf(u)).exp(),
            DistributionSpec::Exponential { lambda } => -u.ln() / lambda,
            DistributionSpec::TruncatedExponential { lambda, mu } => mu - u.ln() / lambda,
            DistributionSpec::Pareto { alpha, beta } => beta * u.powf(-1.0 / alpha),
            DistributionSpec::Uniform { a, b } => a + (b - a) * u,
            DistributionSpec::Power { alpha, b } => b * u.powf(1.0 / alpha),
        }
    }

    /// Density of `ln X` at `u`, and the support of `ln X`.
    fn log_scale_density(&self, u: f64) -> f64 {
        match *self {
            DistributionSpec::Lognormal { m, sigma } => {
                let z = (u - m) / sigma;
                (-0.5 * z * z).exp() / (sigma * (2.0 * PI).sqrt())
            }
            DistributionSpec::Exponential { lambda } => lambda * (u - lambda * u.exp()).exp(),
            DistributionSpec::TruncatedExponential { lambda, mu } => {
                lambda * (u - lambda * (u.exp() - mu)).exp()
            }
            DistributionSpec::Pareto { alpha, beta } => alpha * (alpha * (beta.ln() - u)).exp(),
            DistributionSpec::Uniform { a, b } => u.exp() / (b - a),
            DistributionSpec::Power { alpha, b } => alpha * (alpha * (u - b.ln())).exp(),
        }
    }

    fn log_support(&self) -> (f64, f64) {
        let neg = f64::NEG_INFINITY;
        let pos = f64::INFINITY;
        match *self {
            DistributionSpec::Lognormal { .. } | DistributionSpec::Exponential { .. } => (neg, pos),
            DistributionSpec::TruncatedExponential { mu, .. } => {
                (if mu > 0.0 { mu.ln() } else { neg }, pos)
            }
            DistributionSpec::Pareto { beta, .. } => (beta.ln(), pos),
            DistributionSpec::Uniform { a, b } => (if a > 0.0 { a.ln() } else { neg }, b.ln()),
            DistributionSpec::Power { b, .. } => (neg, b.ln()),
        }
    }
}

/// Additive and multiplicative theoretical parameters.
///
/// Moments that do not exist for the given parameters are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamSet {
    pub mean: Option<f64>,
    pub variance: Option<f64>,
    pub median: Option<f64>,
    pub geo_mean: f64,
    pub geo_var: f64,
    pub geo_std: f64,
    /// `E(X)/E_G(X)`; absent with the mean.
    pub divergence: Option<f64>,
}

impl ParamSet {
    fn new(
        mean: Option<f64>,
        variance: Option<f64>,
        median: Option<f64>,
        geo_mean: f64,
        log_var: f64,
    ) -> Self {
        ParamSet {
            mean,
            variance,
            median,
            geo_mean,
            geo_var: log_var.exp(),
            geo_std: log_var.max(0.0).sqrt().exp(),
            divergence: mean.map(|m| m / geo_mean),
        }
    }
}

pub fn lognormal_params(m: f64, sigma: f64) -> Result<ParamSet> {
    DistributionSpec::lognormal(m, sigma)?;
    let s2 = sigma * sigma;
    Ok(ParamSet::new(
        Some((m + 0.5 * s2).exp()),
        Some((2.0 * m + s2).exp() * s2.exp_m1()),
        Some(m.exp()),
        m.exp(),
        s2,
    ))
}

pub fn exponential_params(lambda: f64) -> Result<ParamSet> {
    DistributionSpec::exponential(lambda)?;
    Ok(ParamSet::new(
        Some(1.0 / lambda),
        Some(1.0 / (lambda * lambda)),
        Some(LN_2 / lambda),
        (-euler_gamma()).exp() / lambda,
        PI * PI / 6.0,
    ))
}

/// Geometric mean of the exponential law shifted to start at `mu`:
/// `mu·exp(e^{λμ}·E1(λμ))`, and `e^{-γ}/λ` in the `mu = 0` limit.
pub fn trunc_exp_geo_mean(lambda: f64, mu: f64) -> Result<f64> {
    DistributionSpec::truncated_exponential(lambda, mu)?;
    if mu == 0.0 {
        return Ok((-euler_gamma()).exp() / lambda);
    }
    // E ln Y = ln μ + e^{λμ}·E1(λμ)
    Ok(mu * e1_scaled(lambda * mu)?.exp())
}

/// Parameters of the left-truncated exponential. The geometric variance has
/// no elementary closed form and is integrated around the closed-form
/// geometric mean.
pub fn trunc_exp_params(lambda: f64, mu: f64) -> Result<ParamSet> {
    let geo_mean = trunc_exp_geo_mean(lambda, mu)?;
    if mu == 0.0 {
        return exponential_params(lambda);
    }
    let log_mean = geo_mean.ln();
    let log_var = integrate(
        |x| {
            let d = x.ln() - log_mean;
            lambda * (-lambda * (x - mu)).exp() * d * d
        },
        &QuadratureSpec::new(mu, f64::INFINITY).with_tol(1e-13),
    )?;
    Ok(ParamSet::new(
        Some(mu + 1.0 / lambda),
        Some(1.0 / (lambda * lambda)),
        Some(mu + LN_2 / lambda),
        geo_mean,
        log_var,
    ))
}

pub fn pareto_params(alpha: f64, beta: f64) -> Result<ParamSet> {
    DistributionSpec::pareto(alpha, beta)?;
    let mean = (alpha > 1.0).then(|| alpha * beta / (alpha - 1.0));
    let variance =
        (alpha > 2.0).then(|| alpha * beta * beta / ((alpha - 2.0) * (alpha - 1.0).powi(2)));
    let median = 2f64.powf(1.0 / alpha) * beta;
    let geo_mean = beta * (1.0 / alpha).exp();
    let params = ParamSet::new(
        mean,
        variance,
        Some(median),
        geo_mean,
        1.0 / (alpha * alpha),
    );
    debug_assert!(median < geo_mean || (geo_mean - median) <= 1e-12 * geo_mean);
    Ok(params)
}

pub fn uniform_params(a: f64, b: f64) -> Result<ParamSet> {
    DistributionSpec::uniform(a, b)?;
    let mid = 0.5 * (a + b);
    let log_mean = if a > 0.0 {
        (b * b.ln() - a * a.ln()) / (b - a) - 1.0
    } else {
        b.ln() - 1.0
    };
    let width = b - a;
    let log_var = integrate(
        |x| {
            let d = x.ln() - log_mean;
            d * d / width
        },
        &QuadratureSpec::new(a, b).with_tol(1e-14),
    )?;
    Ok(ParamSet::new(
        Some(mid),
        Some(width * width / 12.0),
        Some(mid),
        log_mean.exp(),
        log_var,
    ))
}

/// Power law on `[0, b]`, obtained from `1/X ~ Pareto(alpha, 1/b)`.
pub fn power_params(alpha: f64, b: f64) -> Result<ParamSet> {
    DistributionSpec::power(alpha, b)?;
    let dual = pareto_params(alpha, 1.0 / b)?;
    let mean = alpha * b / (alpha + 1.0);
    let second = alpha * b * b / (alpha + 2.0);
    Ok(ParamSet::new(
        Some(mean),
        Some(second - mean * mean),
        Some(b / 2f64.powf(1.0 / alpha)),
        1.0 / dual.geo_mean,
        dual.geo_var.ln(),
    ))
}

/// Moments of the exponentially-uniform pair: `Y ~ U(0,1)` and, given `Y = y`,
/// `X` exponential with mean `y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpUniformMoments {
    pub e_x: f64,
    pub e_lny: f64,
    pub e_xlny: f64,
    pub cov_add: f64,
    pub cov_mult: f64,
}

pub fn expuniform_cov() -> ExpUniformMoments {
    let e_x = 0.5;
    let e_lny = -1.0;
    let e_xlny = -0.25;
    let cov_add = e_xlny - e_x * e_lny;
    ExpUniformMoments {
        e_x,
        e_lny,
        e_xlny,
        cov_add,
        cov_mult: cov_add.exp(),
    }
}

/// Paired draws `(x, y)` from the exponentially-uniform model.
pub fn sample_expuniform(n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let y = open_unit(&mut rng);
            let x = -y * open_unit(&mut rng).ln();
            (x, y)
        })
        .unzip()
}

/// Pareto parameters sharing `(E_G, D_G)` with the exponential of rate `lambda`:
/// `alpha = √6/π`, `beta = e^{-(γ + π/√6)}/lambda`.
pub fn match_exp_pareto(lambda: f64) -> Result<(f64, f64)> {
    DistributionSpec::exponential(lambda)?;
    let alpha = 6f64.sqrt() / PI;
    let beta = (-(euler_gamma() + PI / 6f64.sqrt())).exp() / lambda;
    Ok((alpha, beta))
}

pub fn tail(dist: &DistributionSpec, x: f64) -> f64 {
    dist.tail(x)
}

/// Grid cells used by [`tail_crossings`].
pub const CROSSING_GRID_CELLS: usize = 512;

/// Abscissae in `[lo, hi]` where the two cdfs cross, ascending.
///
/// Scans a log-spaced grid (linear when `lo <= 0`) for strict sign changes
/// of `F_A - F_B` and refines each one by bisection.
pub fn tail_crossings(
    dist_a: &DistributionSpec,
    dist_b: &DistributionSpec,
    lo: f64,
    hi: f64,
) -> Result<Vec<f64>> {
    dist_a.validate()?;
    dist_b.validate()?;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::domain(format!(
            "scan range needs lo < hi, got [{lo}, {hi}]"
        )));
    }
    let diff = |x: f64| dist_b.tail(x) - dist_a.tail(x);
    let cells = CROSSING_GRID_CELLS;
    let grid: Vec<f64> = (0..=cells)
        .map(|i| {
            let t = i as f64 / cells as f64;
            if i == cells {
                hi
            } else if lo > 0.0 {
                lo * (hi / lo).powf(t)
            } else {
                lo + (hi - lo) * t
            }
        })
        .collect();

    let tol = 1e-12 * hi.abs().max(1.0);
    let mut roots = Vec::new();
    let mut last: Option<(f64, f64)> = None;
    for &x in &grid {
        let d = diff(x);
        if d == 0.0 || d.is_nan() {
            continue;
        }
        if let Some((x_prev, d_prev)) = last {
            if (d_prev < 0.0) != (d < 0.0) {
                roots.push(find_root(diff, x_prev, x, tol)?);
            }
        }
        last = Some((x, d));
    }
    Ok(roots)
}

/// Geometric mean and variance by quadrature of `E ln X` and `Var ln X`,
/// integrated over the support of `ln X`.
pub fn numeric_mult_params(dist: &DistributionSpec) -> Result<(f64, f64)> {
    dist.validate()?;
    let (lo, hi) = dist.log_support();
    let spec = QuadratureSpec::new(lo, hi).with_tol(1e-13);
    let log_mean = integrate(|u| u * dist.log_scale_density(u), &spec)?;
    let log_var = integrate(
        |u| {
            let d = u - log_mean;
            d * d * dist.log_scale_density(u)
        },
        &spec,
    )?;
    Ok((log_mean.exp(), log_var.exp()))
}

/// Uniform draw in the open interval (0, 1) with 52 bits of resolution.
pub(crate) fn open_unit<R: RngCore>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}

/// `n` i.i.d. inverse-cdf draws from a ChaCha8 stream seeded with `seed`.
pub fn sample(dist: &DistributionSpec, n: usize, seed: u64) -> Result<Sample> {
    dist.validate()?;
    if n == 0 {
        return Err(Error::domain("sample size must be positive"));
    }
    let normal = Normal::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..n)
        .map(|_| dist.draw(open_unit(&mut rng), &normal))
        .collect();
    Sample::new(values)
}
