//! Exponential trend `y = e^{αx + β}` for the multiplicative model
//! `Y = f(x)·ε`, fitted by least squares on `ln y`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mparams::{addmult_cov, geo_mean, Sample};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpTrendFit {
    /// Slope on the log scale.
    pub alpha_hat: f64,
    /// Intercept on the log scale.
    pub beta_hat: f64,
    pub x_mean: f64,
    /// Variance of the regressor with the `1/n` divisor.
    pub x_var: f64,
    /// `exp(mean ln y)`.
    pub geo_mean_y: f64,
    pub n: usize,
}

impl ExpTrendFit {
    pub fn predict(&self, x: f64) -> f64 {
        predict(self, x)
    }
}

fn validate(xs: &[f64], ys: &[f64]) -> Result<Sample> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::domain("trend fitting needs at least two points"));
    }
    if let Some(bad) = xs.iter().find(|x| !x.is_finite()) {
        return Err(Error::domain(format!("non-finite regressor value {bad}")));
    }
    if xs.iter().all(|&x| x == xs[0]) {
        return Err(Error::DegenerateDesign);
    }
    Sample::try_from(ys)
}

/// Least-squares fit of `ln y = αx + β`.
pub fn fit_exp_trend(xs: &[f64], ys: &[f64]) -> Result<ExpTrendFit> {
    let ys = validate(xs, ys)?;
    let n = xs.len();
    let nf = n as f64;
    let x_mean = xs.iter().sum::<f64>() / nf;
    let zs: Vec<f64> = ys.values().iter().map(|y| y.ln()).collect();
    let z_mean = zs.iter().sum::<f64>() / nf;
    let (sxz, sxx) = xs.iter().zip(&zs).fold((0.0, 0.0), |(sxz, sxx), (&x, &z)| {
        let dx = x - x_mean;
        (sxz + dx * (z - z_mean), sxx + dx * dx)
    });
    let alpha_hat = sxz / sxx;
    Ok(ExpTrendFit {
        alpha_hat,
        beta_hat: z_mean - alpha_hat * x_mean,
        x_mean,
        x_var: sxx / nf,
        geo_mean_y: z_mean.exp(),
        n,
    })
}

/// `exp(α̂x + β̂)`.
pub fn predict(fit: &ExpTrendFit, x: f64) -> f64 {
    (fit.alpha_hat * x + fit.beta_hat).exp()
}

/// The same trend written through the additive-multiplicative covariance:
/// `y(x) = c_G^{(x - x̄)/s²ₓ}·Ḡy`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpApproxForm {
    pub c_g: f64,
    pub x_mean: f64,
    pub x_var: f64,
    pub geo_y: f64,
}

impl ExpApproxForm {
    pub fn curve(&self, x: f64) -> f64 {
        self.c_g.powf((x - self.x_mean) / self.x_var) * self.geo_y
    }
}

pub fn exp_approx_form(xs: &[f64], ys: &[f64]) -> Result<ExpApproxForm> {
    let sample = validate(xs, ys)?;
    let nf = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / nf;
    let x_var = xs.iter().map(|x| (x - x_mean) * (x - x_mean)).sum::<f64>() / nf;
    Ok(ExpApproxForm {
        c_g: addmult_cov(xs, &sample)?,
        x_mean,
        x_var,
        geo_y: geo_mean(&sample),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogResidualHistogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<usize>,
    pub residual_mean: f64,
}

pub const DEFAULT_BINS: usize = 6;

/// Log residuals `ln yᵢ - (α̂xᵢ + β̂)` and their equal-width histogram over
/// `[min, max]`. A zero-width range is widened by 0.5 on each side.
pub fn log_residuals(
    fit: &ExpTrendFit,
    xs: &[f64],
    ys: &[f64],
    bins: usize,
) -> Result<(Vec<f64>, LogResidualHistogram)> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    if bins == 0 {
        return Err(Error::domain("histogram needs at least one bin"));
    }
    let ys = Sample::try_from(ys)?;
    let residuals: Vec<f64> = xs
        .iter()
        .zip(ys.values())
        .map(|(&x, &y)| y.ln() - (fit.alpha_hat * x + fit.beta_hat))
        .collect();
    let residual_mean = residuals.iter().sum::<f64>() / residuals.len() as f64;

    let mut lo = residuals.iter().copied().fold(f64::INFINITY, f64::min);
    let mut hi = residuals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        lo -= 0.5;
        hi += 0.5;
    }
    let width = (hi - lo) / bins as f64;
    let mut bin_edges: Vec<f64> = (0..bins).map(|i| lo + width * i as f64).collect();
    bin_edges.push(hi);
    let mut counts = vec![0usize; bins];
    for r in &residuals {
        let idx = (((r - lo) / width).floor() as usize).min(bins - 1);
        counts[idx] += 1;
    }
    Ok((
        residuals,
        LogResidualHistogram {
            bin_edges,
            counts,
            residual_mean,
        },
    ))
}

/// Geometric mean of the response, `exp(z̄)`.
pub fn geo_mean_response(ys: &[f64]) -> Result<f64> {
    Ok(geo_mean(&Sample::try_from(ys)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn noiseless_exponential() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64 * 0.3 - 1.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| (2.0 * x + 1.0).exp()).collect();
        let fit = fit_exp_trend(&xs, &ys).unwrap();
        assert!((fit.alpha_hat - 2.0).abs() < 1e-12);
        assert!((fit.beta_hat - 1.0).abs() < 1e-12);
        assert!((predict(&fit, 0.0) - E).abs() < 1e-12);
        let (res, hist) = log_residuals(&fit, &xs, &ys, DEFAULT_BINS).unwrap();
        assert!(res.iter().all(|r| r.abs() < 1e-12));
        assert_eq!(hist.counts.iter().sum::<usize>(), 10);
        assert!(hist.bin_edges.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn flat_response() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys = [0.7; 4];
        let fit = fit_exp_trend(&xs, &ys).unwrap();
        assert_eq!(fit.alpha_hat, 0.0);
        assert!((fit.beta_hat - 0.7f64.ln()).abs() < 1e-15);
        let form = exp_approx_form(&xs, &ys).unwrap();
        assert_eq!(form.c_g, 1.0);
        assert!((form.curve(17.0) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn two_points() {
        let form = exp_approx_form(&[0.0, 1.0], &[1.0, E]).unwrap();
        assert!((form.c_g - 0.25f64.exp()).abs() < 1e-14);
        assert!((form.curve(0.0) - 1.0).abs() < 1e-14);
        assert!((form.curve(1.0) - E).abs() < 1e-14);
    }

    #[test]
    fn centroid() {
        let xs = [1.0, 2.0, 4.0, 7.0];
        let ys = [3.0, 2.5, 1.0, 0.9];
        let fit = fit_exp_trend(&xs, &ys).unwrap();
        let g = geo_mean_response(&ys).unwrap();
        assert!((predict(&fit, fit.x_mean) / g - 1.0).abs() < 1e-12);
        assert!((fit.geo_mean_y / g - 1.0).abs() < 1e-15);
        let (_, hist) = log_residuals(&fit, &xs, &ys, 3).unwrap();
        assert!(hist.residual_mean.abs() < 1e-12);
    }

    #[test]
    fn errors() {
        assert_eq!(
            fit_exp_trend(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0]),
            Err(Error::DegenerateDesign)
        );
        assert!(matches!(
            fit_exp_trend(&[1.0, 2.0], &[1.0, 0.0]),
            Err(Error::NonPositive { index: 1, .. })
        ));
        assert!(matches!(
            fit_exp_trend(&[1.0, 2.0], &[1.0]),
            Err(Error::LengthMismatch { .. })
        ));
        let fit = fit_exp_trend(&[1.0, 2.0], &[1.0, 2.0]).unwrap();
        assert!(log_residuals(&fit, &[1.0], &[1.0, 2.0], 6).is_err());
        assert_eq!(geo_mean_response(&[E, E]).unwrap(), E);
    }
}
