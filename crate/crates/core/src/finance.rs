//! Return-series analytics: accumulation coefficients, horizon
//! accumulation and discounting under geometric and arithmetic means, and
//! out-of-sample forecasts.

use std::ops::RangeInclusive;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mparams::{arith_mean, geo_mean, geo_std, k_interval, Sample, VarianceMode};

/// Year-indexed period rates with derived accumulation coefficients
/// `a = 1 + i` and discount factors `v = 1/a`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReturnSeries {
    years: Vec<i32>,
    rates: Vec<f64>,
    coefficients: Vec<f64>,
    discounts: Vec<f64>,
}

impl ReturnSeries {
    pub fn years(&self) -> &[i32] {
        &self.years
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn discounts(&self) -> &[f64] {
        &self.discounts
    }

    pub fn len(&self) -> usize {
        self.years.len()
    }

    pub fn is_empty(&self) -> bool {
        self.years.is_empty()
    }
}

/// Builds a series sorted by year. Coefficients come from the exact rates.
pub fn build_series(years: &[i32], rates: &[f64]) -> Result<ReturnSeries> {
    if years.len() != rates.len() {
        return Err(Error::LengthMismatch {
            left: years.len(),
            right: rates.len(),
        });
    }
    if years.is_empty() {
        return Err(Error::Empty);
    }
    let mut rows: Vec<(i32, f64)> = years.iter().copied().zip(rates.iter().copied()).collect();
    rows.sort_by_key(|&(y, _)| y);
    for w in rows.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::domain(format!("duplicate year {}", w[0].0)));
        }
    }
    if let Some(&(year, rate)) = rows.iter().find(|(_, r)| !(*r > -1.0) || !r.is_finite()) {
        return Err(Error::domain(format!(
            "rate {rate} in {year} is not above -1 (total loss breaks the multiplicative model)"
        )));
    }
    let (years, rates): (Vec<i32>, Vec<f64>) = rows.into_iter().unzip();
    let coefficients: Vec<f64> = rates.iter().map(|r| 1.0 + r).collect();
    let discounts = coefficients.iter().map(|a| 1.0 / a).collect();
    Ok(ReturnSeries {
        years,
        rates,
        coefficients,
        discounts,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KInterval {
    pub k: u32,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HorizonReport {
    pub n: usize,
    pub geo_mean: f64,
    pub arith_mean: f64,
    pub geo_std_unbiased: f64,
    pub fv_geometric: f64,
    pub fv_arithmetic: f64,
    pub pv_geometric: f64,
    pub pv_arithmetic: f64,
    pub k_intervals: Vec<KInterval>,
}

pub fn horizon_report(series: &ReturnSeries, ks: &[u32]) -> Result<HorizonReport> {
    let n = series.len();
    if n < 2 {
        return Err(Error::domain("horizon report needs at least two periods"));
    }
    let coefficients = Sample::try_from(series.coefficients())?;
    let discounts = Sample::try_from(series.discounts())?;
    let g = geo_mean(&coefficients);
    let a = arith_mean(series.coefficients());
    let s = geo_std(&coefficients, VarianceMode::Unbiased)?;
    let power = n as i32;
    let k_intervals = ks
        .iter()
        .map(|&k| k_interval(g, s, k).map(|(lo, hi)| KInterval { k, lo, hi }))
        .collect::<Result<Vec<_>>>()?;
    Ok(HorizonReport {
        n,
        geo_mean: g,
        arith_mean: a,
        geo_std_unbiased: s,
        fv_geometric: g.powi(power),
        fv_arithmetic: a.powi(power),
        pv_geometric: geo_mean(&discounts).powi(power),
        pv_arithmetic: arith_mean(series.discounts()).powi(power),
        k_intervals,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Forecast {
    pub train_geo_mean: f64,
    pub train_arith_mean: f64,
    pub projected_geometric: f64,
    pub projected_arithmetic: f64,
    /// Product of the actual coefficients over the horizon, when the series
    /// covers every year of it.
    pub realized: Option<f64>,
}

/// Projects `horizon` periods past the training window from its geometric and
/// arithmetic mean coefficients.
pub fn forecast(
    series: &ReturnSeries,
    train: RangeInclusive<i32>,
    horizon: u32,
) -> Result<Forecast> {
    if horizon == 0 {
        return Err(Error::domain("forecast horizon must be at least 1"));
    }
    let (first, last) = (*train.start(), *train.end());
    let (&min_year, &max_year) = match (series.years.first(), series.years.last()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Empty),
    };
    if first > last || first < min_year || last > max_year {
        return Err(Error::domain(format!(
            "training window {first}:{last} is outside the data {min_year}:{max_year}"
        )));
    }
    let window: Vec<f64> = series
        .years
        .iter()
        .zip(&series.coefficients)
        .filter(|(y, _)| train.contains(y))
        .map(|(_, &a)| a)
        .collect();
    if window.is_empty() {
        return Err(Error::domain("empty training window"));
    }
    let g = geo_mean(&Sample::new(window.clone())?);
    let a = arith_mean(&window);
    let realized = (1..=horizon as i32)
        .map(|h| {
            series
                .years
                .iter()
                .position(|&y| y == last + h)
                .map(|i| series.coefficients[i])
        })
        .product::<Option<f64>>();
    Ok(Forecast {
        train_geo_mean: g,
        train_arith_mean: a,
        projected_geometric: g.powi(horizon as i32),
        projected_arithmetic: a.powi(horizon as i32),
        realized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficients_and_discounts() {
        let s = build_series(&[2009, 2008, 2007], &[0.3347, -0.4821, 0.0]).unwrap();
        assert_eq!(s.years(), &[2007, 2008, 2009]);
        assert_eq!(s.coefficients()[0], 1.0);
        assert_eq!(s.discounts()[0], 1.0);
        assert!((s.coefficients()[1] - 0.5179).abs() < 1e-15);
        assert!((s.coefficients()[2] - 1.3347).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_series() {
        assert!(build_series(&[2000, 2001], &[0.1, -1.0]).is_err());
        assert!(build_series(&[2000, 2000], &[0.1, 0.2]).is_err());
        assert!(build_series(&[2000], &[0.1, 0.2]).is_err());
        assert!(build_series(&[], &[]).is_err());
    }

    #[test]
    fn constant_rates() {
        let s = build_series(&[1, 2, 3], &[0.1; 3]).unwrap();
        let r = horizon_report(&s, &[1]).unwrap();
        assert!((r.fv_geometric - 1.331).abs() < 1e-12);
        assert!((r.fv_arithmetic - 1.331).abs() < 1e-12);
        assert_eq!(r.geo_std_unbiased, 1.0);
        assert!(horizon_report(&s, &[0]).is_err());
    }

    #[test]
    fn forecast_windows() {
        let s = build_series(&[1, 2, 3, 4], &[0.1; 4]).unwrap();
        let f = forecast(&s, 1..=3, 1).unwrap();
        assert!((f.projected_geometric - f.realized.unwrap()).abs() < 1e-15);
        let f = forecast(&s, 1..=4, 2).unwrap();
        assert_eq!(f.realized, None);
        assert!(forecast(&s, 1..=3, 0).is_err());
        assert!(forecast(&s, 0..=3, 1).is_err());
        #[allow(clippy::reversed_empty_ranges)]
        let backwards = 3..=2;
        assert!(forecast(&s, backwards, 1).is_err());
    }
}
