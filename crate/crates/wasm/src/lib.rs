//! Browser bindings for the demo page. Every export returns a JSON string;
//! failures come back as `{"error": "..."}` so the page needs no exception
//! handling.

use mstat::distlib::{match_exp_pareto, numeric_mult_params, tail_crossings, DistributionSpec};
use mstat::mparams::{summarize, Sample};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn finish(result: Result<Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value, String> {
    serde_json::to_value(v).map_err(|e| e.to_string())
}

/// Parameters of the distribution described by `spec`, e.g.
/// `{"family":"pareto","alpha":2,"beta":1}`, with the quadrature cross-check.
pub fn distribution_params(spec: &str) -> Result<Value, String> {
    let dist: DistributionSpec = serde_json::from_str(spec).map_err(|e| e.to_string())?;
    let p = dist.params().map_err(|e| e.to_string())?;
    let (gm, gv) = numeric_mult_params(&dist).map_err(|e| e.to_string())?;
    let mut v = to_value(&p)?;
    v["numeric_geo_mean"] = json!(gm);
    v["numeric_geo_var"] = json!(gv);
    Ok(v)
}

/// Pareto law matched to the exponential of rate `lambda`, the crossings of
/// their tails on `[lo, hi]` and both tails sampled at `points` abscissae.
pub fn matched_tails(lambda: f64, lo: f64, hi: f64, points: usize) -> Result<Value, String> {
    let (alpha, beta) = match_exp_pareto(lambda).map_err(|e| e.to_string())?;
    let expo = DistributionSpec::exponential(lambda).map_err(|e| e.to_string())?;
    let pareto = DistributionSpec::pareto(alpha, beta).map_err(|e| e.to_string())?;
    let crossings = tail_crossings(&expo, &pareto, lo, hi).map_err(|e| e.to_string())?;
    let points = points.clamp(2, 5_000);
    let mut x = Vec::with_capacity(points);
    let mut exp_tail = Vec::with_capacity(points);
    let mut pareto_tail = Vec::with_capacity(points);
    for i in 0..points {
        let t = lo + (hi - lo) * i as f64 / (points - 1) as f64;
        x.push(t);
        exp_tail.push(expo.tail(t));
        pareto_tail.push(pareto.tail(t));
    }
    Ok(json!({
        "alpha": alpha,
        "beta": beta,
        "crossings": crossings,
        "x": x,
        "tail_exponential": exp_tail,
        "tail_pareto": pareto_tail,
    }))
}

/// Multiplicative summary of numbers separated by commas, whitespace or
/// semicolons.
pub fn describe_values(text: &str) -> Result<Value, String> {
    let values = text
        .split(|c: char| c == ',' || c == ';' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| format!("`{s}` is not a number"))
        })
        .collect::<Result<Vec<f64>, String>>()?;
    let sample = Sample::new(values).map_err(|e| e.to_string())?;
    to_value(&summarize(&sample).map_err(|e| e.to_string())?)
}

#[wasm_bindgen(js_name = distributionParams)]
pub fn distribution_params_js(spec: &str) -> String {
    finish(distribution_params(spec))
}

#[wasm_bindgen(js_name = matchedTails)]
pub fn matched_tails_js(lambda: f64, lo: f64, hi: f64, points: usize) -> String {
    finish(matched_tails(lambda, lo, hi, points))
}

#[wasm_bindgen(js_name = describeValues)]
pub fn describe_values_js(text: &str) -> String {
    finish(describe_values(text))
}
