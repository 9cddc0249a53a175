//! One function per subcommand; each returns the JSON document to print.

use std::path::Path;

use mstat::distlib::{
    match_exp_pareto, numeric_mult_params, pareto_params, tail_crossings, uniform_params,
    DistributionSpec,
};
use mstat::finance::{build_series, forecast, horizon_report};
use mstat::mcverify::{check_geo_var_unbiased, run_check, scan_inequalities, Check, McConfig};
use mstat::mparams::{summarize, Sample, VarianceMode};
use mstat::regress::{fit_exp_trend, log_residuals};
use serde_json::{json, Value};

use crate::data::{parse_csv, DataTable, Schema};
use crate::{CliError, DistParams, Family, McCheck};

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

/// Rewrites an index-based positivity error in terms of the file's rows.
fn locate(table: &DataTable, err: mstat::Error) -> CliError {
    match err {
        mstat::Error::NonPositive { index, value } => match table.rows.get(index) {
            Some(row) => CliError::Invalid(format!(
                "year {} (line {}) has value {value}; values must be strictly positive",
                row.year, row.line
            )),
            None => err.into(),
        },
        other => other.into(),
    }
}

pub fn cmd_describe(file: &Path) -> Result<Value, CliError> {
    let table = parse_csv(file, Schema::YearlyValues, false)?;
    let sample = Sample::new(table.values()).map_err(|e| locate(&table, e))?;
    Ok(to_value(&summarize(&sample)?))
}

fn parse_range<T: std::str::FromStr>(text: &str, what: &str) -> Result<(T, T), CliError> {
    let bad = || CliError::Invalid(format!("{what} must look like LO:HI, got `{text}`"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    Ok((
        lo.trim().parse().map_err(|_| bad())?,
        hi.trim().parse().map_err(|_| bad())?,
    ))
}

pub fn cmd_returns(
    file: &Path,
    percent: bool,
    ks: &[u32],
    train: Option<&str>,
    horizon: Option<u32>,
) -> Result<Value, CliError> {
    if ks.contains(&0) {
        return Err(CliError::Invalid("--k values must be at least 1".into()));
    }
    let table = parse_csv(file, Schema::Returns, percent)?;
    let series = build_series(&table.years(), &table.values())?;
    let mut out = to_value(&horizon_report(&series, ks)?);
    if let Some(window) = train {
        let (first, last): (i32, i32) = parse_range(window, "--train")?;
        let max_year = series.years().last().copied().unwrap_or(last);
        let h = match horizon {
            Some(h) => h,
            None => u32::try_from(max_year - last).unwrap_or(0).max(1),
        };
        let f = forecast(&series, first..=last, h)?;
        if let Value::Object(map) = &mut out {
            map.insert("forecast".into(), to_value(&f));
        }
    } else if horizon.is_some() {
        return Err(CliError::Invalid("--horizon needs --train".into()));
    }
    Ok(out)
}

pub fn cmd_trend(file: &Path, t_origin: i32, bins: usize) -> Result<Value, CliError> {
    let table = parse_csv(file, Schema::YearlyValues, false)?;
    let years = table.years();
    if years.windows(2).all(|w| w[0] == w[1]) {
        return Err(CliError::Invalid(
            "trend needs at least two distinct years".into(),
        ));
    }
    let first = years[0];
    let ts: Vec<f64> = years
        .iter()
        .map(|y| f64::from(y - first + t_origin))
        .collect();
    let ys = table.values();
    Sample::try_from(ys.as_slice()).map_err(|e| locate(&table, e))?;
    let fit = fit_exp_trend(&ts, &ys)?;
    let (residuals, histogram) = log_residuals(&fit, &ts, &ys, bins)?;
    let points: Vec<Value> = table
        .rows
        .iter()
        .zip(&ts)
        .zip(&residuals)
        .map(|((row, &t), &r)| {
            json!({
                "year": row.year,
                "t": t,
                "value": row.value,
                "prediction": fit.predict(t),
                "residual": r,
            })
        })
        .collect();
    Ok(json!({
        "alpha_hat": fit.alpha_hat,
        "beta_hat": fit.beta_hat,
        "geo_mean_y": fit.geo_mean_y,
        "x_mean": fit.x_mean,
        "x_var": fit.x_var,
        "n": fit.n,
        "t_origin": t_origin,
        "points": points,
        "histogram": to_value(&histogram),
    }))
}

fn need(v: Option<f64>, flag: &str, family: &str) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::Invalid(format!("{family} needs --{flag}")))
}

/// Builds and validates a distribution from command-line parameters.
pub fn build_dist(family: Family, p: &DistParams) -> Result<DistributionSpec, CliError> {
    let d = match family {
        Family::Lognormal => DistributionSpec::lognormal(
            need(p.m, "m", "lognormal")?,
            need(p.sigma, "sigma", "lognormal")?,
        ),
        Family::Exponential => {
            DistributionSpec::exponential(need(p.lambda, "lambda", "exponential")?)
        }
        Family::TruncatedExponential => DistributionSpec::truncated_exponential(
            need(p.lambda, "lambda", "truncated-exponential")?,
            need(p.mu, "mu", "truncated-exponential")?,
        ),
        Family::Pareto => DistributionSpec::pareto(
            need(p.alpha, "alpha", "pareto")?,
            need(p.beta, "beta", "pareto")?,
        ),
        Family::Uniform => {
            DistributionSpec::uniform(need(p.a, "a", "uniform")?, need(p.b, "b", "uniform")?)
        }
        Family::Power => {
            DistributionSpec::power(need(p.alpha, "alpha", "power")?, need(p.b, "b", "power")?)
        }
    };
    Ok(d?)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

pub fn cmd_dist(family: Family, p: &DistParams, numeric_check: bool) -> Result<Value, CliError> {
    let dist = build_dist(family, p)?;
    let params = dist.params()?;
    let mut out = to_value(&params);
    if let Value::Object(map) = &mut out {
        map.insert("distribution".into(), to_value(&dist));
        if numeric_check {
            let (gm, gv) = numeric_mult_params(&dist)?;
            map.insert(
                "numeric_check".into(),
                json!({
                    "geo_mean": gm,
                    "geo_var": gv,
                    "max_rel_dev": rel(params.geo_mean, gm).max(rel(params.geo_var, gv)),
                }),
            );
        }
    }
    Ok(out)
}

/// Points of a geometric grid on `[lo, hi]`, linear if `lo <= 0`.
fn grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let last = (points - 1) as f64;
    (0..points)
        .map(|i| {
            let t = i as f64 / last;
            if i + 1 == points {
                hi
            } else if lo > 0.0 {
                lo * (hi / lo).powf(t)
            } else {
                lo + (hi - lo) * t
            }
        })
        .collect()
}

pub fn cmd_match(lambda: f64, scan: &str, points: usize) -> Result<Value, CliError> {
    let (alpha, beta) = match_exp_pareto(lambda)?;
    let (lo, hi): (f64, f64) = parse_range(scan, "--scan")?;
    if points < 2 {
        return Err(CliError::Invalid("--points must be at least 2".into()));
    }
    let expo = DistributionSpec::exponential(lambda)?;
    let pareto = DistributionSpec::pareto(alpha, beta)?;
    let roots = tail_crossings(&expo, &pareto, lo, hi)?;
    let crossings: Vec<Value> = roots
        .iter()
        .map(|&x| json!({"x": x, "residual": (pareto.tail(x) - expo.tail(x)).abs()}))
        .collect();
    let series: Vec<Value> = grid(lo, hi, points)
        .into_iter()
        .map(|x| json!({"x": x, "tail_exponential": expo.tail(x), "tail_pareto": pareto.tail(x)}))
        .collect();
    Ok(json!({
        "lambda": lambda,
        "alpha": alpha,
        "beta": beta,
        "exponential": to_value(&expo.params()?),
        "pareto": to_value(&pareto.params()?),
        "crossings": crossings,
        "tail_series": series,
    }))
}

/// Returns the document and the exit status (3 when the check fails).
pub fn cmd_mc(
    check: McCheck,
    dist: DistributionSpec,
    n: usize,
    reps: usize,
    seed: u64,
    biased: bool,
) -> Result<(Value, i32), CliError> {
    let cfg = McConfig {
        dist,
        n,
        reps,
        seed,
    };
    let check = match check {
        McCheck::GeoMeanUnbiased => Check::GeoMeanUnbiased,
        McCheck::DgOfMean => Check::DgOfMean,
        McCheck::GeoVarUnbiased => Check::GeoVarUnbiased,
        McCheck::Inequalities => {
            let scan = scan_inequalities(&dist, &dist, reps, n, seed)?;
            let ok = scan.violations_superadd == 0 && scan.violations_gdisp == 0;
            let mut v = to_value(&scan);
            if let Value::Object(map) = &mut v {
                map.insert("check".into(), json!("inequalities"));
                map.insert("config".into(), to_value(&cfg));
                map.insert("passed".into(), json!(ok));
            }
            return Ok((v, if ok { 0 } else { 3 }));
        }
    };
    if biased && check != Check::GeoVarUnbiased {
        return Err(CliError::Invalid(
            "--biased applies to geo-var-unbiased only".into(),
        ));
    }
    let report = if check == Check::GeoVarUnbiased {
        let mode = if biased {
            VarianceMode::Biased
        } else {
            VarianceMode::Unbiased
        };
        check_geo_var_unbiased(&cfg, mode)?
    } else {
        run_check(check, &cfg)?
    };
    let passed = report.relative_error <= check.tolerance();
    let mut v = to_value(&report);
    if let Value::Object(map) = &mut v {
        map.insert("check".into(), json!(check.name()));
        map.insert("config".into(), to_value(&cfg));
        map.insert("tolerance".into(), json!(check.tolerance()));
        map.insert("passed".into(), json!(passed));
    }
    Ok((v, if passed { 0 } else { 3 }))
}

/// `E(X)/E_G(X)` for the uniform law between `a` and `b`, in either order.
fn uniform_divergence(a: f64, b: f64) -> Result<f64, CliError> {
    let p = uniform_params(a.min(b), a.max(b))?;
    Ok(p.divergence.unwrap_or(f64::NAN))
}

const FIXED_ENDPOINTS: [f64; 3] = [0.5, 1.0, 1.5];

pub fn cmd_plotdata(figure: u8, lambda: f64) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Invalid(e.to_string());
    match figure {
        1 => {
            w.write_record(["alpha", "mean", "geo_mean", "median"])
                .map_err(io)?;
            for i in 2..=100 {
                let alpha = f64::from(i) / 20.0;
                let p = pareto_params(alpha, 1.0)?;
                let mean = p.mean.map_or(String::new(), |m| m.to_string());
                let median = p.median.unwrap_or(f64::NAN);
                w.write_record([
                    alpha.to_string(),
                    mean,
                    p.geo_mean.to_string(),
                    median.to_string(),
                ])
                .map_err(io)?;
            }
        }
        2 => {
            let (alpha, beta) = match_exp_pareto(lambda)?;
            let expo = DistributionSpec::exponential(lambda)?;
            let pareto = DistributionSpec::pareto(alpha, beta)?;
            w.write_record(["x", "tail_exponential", "tail_pareto"])
                .map_err(io)?;
            let hi = 30.0 / lambda;
            for i in 0..=300 {
                let x = hi * f64::from(i) / 300.0;
                w.write_record([
                    x.to_string(),
                    expo.tail(x).to_string(),
                    pareto.tail(x).to_string(),
                ])
                .map_err(io)?;
            }
        }
        3 | 4 => {
            let (fixed, free) = if figure == 3 { ("a", "b") } else { ("b", "a") };
            w.write_record([fixed, free, "d"]).map_err(io)?;
            for &c in &FIXED_ENDPOINTS {
                for i in 0..=120 {
                    let x = f64::from(i) / 40.0;
                    if (x - c).abs() < 1e-12 {
                        continue;
                    }
                    let d = uniform_divergence(c, x)?;
                    w.write_record([c.to_string(), x.to_string(), d.to_string()])
                        .map_err(io)?;
                }
            }
        }
        other => {
            return Err(CliError::Invalid(format!(
                "unknown figure {other}; use 1 to 4"
            )))
        }
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Invalid(e.to_string()))
}
