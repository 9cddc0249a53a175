//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::f64::consts::{E, PI};
use std::process::{Command, ExitCode};
use std::time::Instant;

use mstat::distlib::{exponential_params, expuniform_cov, numeric_mult_params, DistributionSpec};
use mstat::mcverify::{run_check, scan_inequalities, Check, McConfig};
use mstat::mparams::{geo_mean, geo_std, geo_var, Sample, VarianceMode};
use mstat::regress::{exp_approx_form, fit_exp_trend, geo_mean_response};
use mstat::specfun::euler_gamma;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

/// Collects failed sub-checks of one criterion.
#[derive(Default)]
struct Tally {
    failures: Vec<String>,
    checks: usize,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn near(&mut self, label: &str, got: f64, want: f64, tol: f64) {
        self.check((got - want).abs() <= tol, || {
            format!("{label} = {got:.6}, want {want} ± {tol}")
        });
    }

    fn rel(&mut self, label: &str, got: f64, want: f64, tol: f64) {
        self.check((got - want).abs() <= tol * want.abs(), || {
            format!("{label} = {got:e}, want {want:e} (rel {tol:e})")
        });
    }
}

fn mstat(args: &[&str]) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_mstat"))
        .args(args)
        .output()
        .expect("binary runs");
    assert_eq!(
        out.status.code(),
        Some(0),
        "mstat {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn f(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or(f64::NAN)
}

fn table1(t: &mut Tally) {
    let v = mstat(&[
        "returns",
        &data("wig20.csv"),
        "--k",
        "1,2,3",
        "--train",
        "1995:2004",
        "--horizon",
        "5",
    ]);
    t.near("geo_mean", f(&v, "geo_mean"), 1.0820, 5e-4);
    t.near("s_G", f(&v, "geo_std_unbiased"), 1.1600, 5e-4);
    t.near("FV", f(&v, "fv_geometric"), 3.2656, 2e-3);
    t.near("FV'", f(&v, "fv_arithmetic"), 6.2161, 2e-3);
    t.near("PV", f(&v, "pv_geometric"), 0.3062, 2e-3);
    t.near("PV arith", f(&v, "pv_arithmetic"), 0.6504, 2e-3);
    let want = [(0.9328, 1.2550), (0.8042, 1.4561), (0.6933, 1.6890)];
    let ks = v["k_intervals"].as_array().cloned().unwrap_or_default();
    t.check(ks.len() == 3, || format!("{} k-intervals", ks.len()));
    for (iv, (lo, hi)) in ks.iter().zip(want) {
        let k = iv["k"].as_u64().unwrap_or(0);
        t.near(&format!("k={k} lo"), f(iv, "lo"), lo, 1.5e-3);
        t.near(&format!("k={k} hi"), f(iv, "hi"), hi, 1.5e-3);
    }
    let fc = &v["forecast"];
    t.near(
        "forecast geometric",
        f(fc, "projected_geometric"),
        1.6370,
        2e-3,
    );
    t.near(
        "forecast arithmetic",
        f(fc, "projected_arithmetic"),
        1.9653,
        2e-3,
    );
    t.near("forecast realized", f(fc, "realized"), 1.2185, 2e-3);
}

fn table2(t: &mut Tally) {
    let v = mstat(&["trend", &data("treasury.csv"), "--t-origin", "1"]);
    t.near("alpha_hat", f(&v, "alpha_hat"), -0.1424892068, 1e-4);
    t.near("beta_hat", f(&v, "beta_hat"), -0.7299164795, 1e-4);
    let d = mstat(&["describe", &data("treasury.csv")]);
    t.near("geo_mean", f(&d, "geo_mean"), 0.1245, 5e-4);
    t.near("arith_mean", f(&d, "arith_mean"), 0.1661, 5e-4);
}

fn grid() -> Vec<DistributionSpec> {
    let mut g = Vec::new();
    for (m, s) in [(0.0, 1.0), (1.0, 2.0), (-2.0, 0.3), (0.5, 0.05), (3.0, 1.5)] {
        g.push(DistributionSpec::lognormal(m, s).unwrap());
    }
    for l in [0.1, 0.5, 1.0, 3.0, 20.0] {
        g.push(DistributionSpec::exponential(l).unwrap());
    }
    for (l, mu) in [(1.0, 1.0), (2.0, 0.01), (0.5, 3.0), (5.0, 0.2), (1.0, 10.0)] {
        g.push(DistributionSpec::truncated_exponential(l, mu).unwrap());
    }
    for (a, b) in [(0.5, 1.0), (1.0, 1.0), (2.0, 1.0), (4.0, 0.2), (7.0, 3.0)] {
        g.push(DistributionSpec::pareto(a, b).unwrap());
    }
    for (a, b) in [(0.0, 1.0), (0.0, E), (0.5, 1.5), (1.0, 4.0), (2.0, 2.1)] {
        g.push(DistributionSpec::uniform(a, b).unwrap());
    }
    for (a, b) in [(1.5, 1.0), (2.0, 1.0), (3.0, 0.5), (10.0, 2.0), (1.1, 7.0)] {
        g.push(DistributionSpec::power(a, b).unwrap());
    }
    g
}

fn closed_forms(t: &mut Tally) {
    for d in grid() {
        let p = d.params().unwrap();
        let (gm, gv) = numeric_mult_params(&d).unwrap();
        t.rel(&format!("{d:?} geo_mean"), p.geo_mean, gm, 1e-7);
        t.rel(&format!("{d:?} geo_var"), p.geo_var, gv, 1e-7);
    }
    let g = euler_gamma();
    for lambda in [0.5, 1.0, 4.0] {
        let p = exponential_params(lambda).unwrap();
        t.rel("exp geo_mean", p.geo_mean, (-g).exp() / lambda, 1e-7);
        t.rel("exp geo_var", p.geo_var, (PI * PI / 6.0).exp(), 1e-7);
        t.rel("exp divergence", p.divergence.unwrap(), g.exp(), 1e-7);
    }
    t.near("e^gamma", g.exp(), 1.781, 1e-3);
    let c = expuniform_cov().cov_mult;
    t.rel("C_G", c, 0.25f64.exp(), 1e-7);
    t.near("C_G printed", c, 1.2840, 5e-5);
}

fn estimators(t: &mut Tally) {
    let dists = [
        DistributionSpec::lognormal(0.0, 1.0).unwrap(),
        DistributionSpec::exponential(1.0).unwrap(),
        DistributionSpec::pareto(2.0, 1.0).unwrap(),
    ];
    for dist in dists {
        for check in [
            Check::GeoMeanUnbiased,
            Check::DgOfMean,
            Check::GeoVarUnbiased,
        ] {
            let cfg = McConfig {
                dist,
                n: 10,
                reps: 100_000,
                seed: 42,
            };
            let r = run_check(check, &cfg).unwrap();
            t.check(r.relative_error <= check.tolerance(), || {
                format!("{} on {}: {r:?}", check.name(), dist.family())
            });
        }
    }
}

fn positive_vec(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = rng.random_range(2..40);
    (0..n)
        .map(|_| 10f64.powf(rng.random_range(-3.0..3.0)))
        .collect()
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn identities(t: &mut Tally) {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let tol = 1e-10;
    let modes = [VarianceMode::Biased, VarianceMode::Unbiased];
    let mut worst = 0.0f64;
    for _ in 0..1_000 {
        let v = positive_vec(&mut rng);
        let s = Sample::new(v.clone()).unwrap();
        let map = |g: &dyn Fn(f64) -> f64| Sample::new(v.iter().map(|&x| g(x)).collect()).unwrap();
        let c = 10f64.powf(rng.random_range(-3.0..3.0));
        let a: f64 = rng.random_range(-3.0..3.0);
        let cs = map(&|x| c * x);
        let pa = map(&|x| x.powf(a));
        let inv = map(&|x| 1.0 / x);
        worst = worst.max(rel_err(geo_mean(&cs), c * geo_mean(&s)));
        worst = worst.max(rel_err(geo_mean(&pa), geo_mean(&s).powf(a)));
        worst = worst.max(rel_err(geo_mean(&inv), 1.0 / geo_mean(&s)));
        for mode in modes {
            let base = geo_var(&s, mode).unwrap();
            worst = worst.max(rel_err(geo_var(&cs, mode).unwrap(), base));
            worst = worst.max(rel_err(
                geo_std(&cs, mode).unwrap(),
                geo_std(&s, mode).unwrap(),
            ));
            worst = worst.max(rel_err(geo_var(&pa, mode).unwrap(), base.powf(a * a)));
            worst = worst.max(rel_err(geo_var(&inv, mode).unwrap(), base));
            t.check(base >= 1.0, || format!("geo_var {base} < 1"));
        }
        let w: Vec<f64> = (0..v.len())
            .map(|_| rng.random_range(0.01..100.0))
            .collect();
        let ws = Sample::new(w.clone()).unwrap();
        let prod = Sample::new(v.iter().zip(&w).map(|(x, y)| x * y).collect()).unwrap();
        worst = worst.max(rel_err(geo_mean(&prod), geo_mean(&s) * geo_mean(&ws)));
        let am = v.iter().sum::<f64>() / v.len() as f64;
        t.check(geo_mean(&s) <= am * (1.0 + 1e-14), || {
            "Jensen violated".into()
        });
    }
    t.check(worst <= tol, || format!("worst identity error {worst:e}"));

    let ln = DistributionSpec::lognormal(0.0, 1.0).unwrap();
    let pa = DistributionSpec::pareto(0.8, 1.0).unwrap();
    for (x, y) in [(ln, ln), (pa, ln)] {
        let scan = scan_inequalities(&x, &y, 10_000, 10, 42).unwrap();
        t.check(
            scan.violations_superadd == 0 && scan.violations_gdisp == 0,
            || format!("inequality scan {scan:?}"),
        );
    }
}

fn regression(t: &mut Tally) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.random_range(3..40);
        let xs: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
        let ys: Vec<f64> = (0..n)
            .map(|_| 10f64.powf(rng.random_range(-2.0..2.0)))
            .collect();
        let fit = fit_exp_trend(&xs, &ys).unwrap();
        let form = exp_approx_form(&xs, &ys).unwrap();
        for i in 0..10 {
            let x = -12.0 + 24.0 * f64::from(i) / 9.0;
            worst = worst.max(rel_err(form.curve(x), fit.predict(x)));
        }
        let gy = geo_mean_response(&ys).unwrap();
        worst = worst.max(rel_err(fit.predict(fit.x_mean), gy));
    }
    t.check(worst <= 1e-10, || format!("worst curve mismatch {worst:e}"));
}

fn crossings(t: &mut Tally) {
    let lambda = (-(euler_gamma() + PI / 6f64.sqrt())).exp();
    let v = mstat(&[
        "match",
        "--lambda",
        &format!("{lambda:e}"),
        "--scan",
        "1:100",
    ]);
    let roots = v["crossings"].as_array().cloned().unwrap_or_default();
    t.check(!roots.is_empty(), || "no crossings found".into());
    let expo = DistributionSpec::exponential(lambda).unwrap();
    let pareto = DistributionSpec::pareto(f(&v, "alpha"), f(&v, "beta")).unwrap();
    for r in &roots {
        let x = f(r, "x");
        let resid = (pareto.cdf(x) - expo.cdf(x)).abs();
        t.check(resid < 1e-10 && f(r, "residual") < 1e-10, || {
            format!("root {x}: residual {resid:e}")
        });
    }
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn(&mut Tally));
    let criteria: [Criterion; 7] = [
        ("Table 1 reproduction", table1),
        ("Table 2 reproduction", table2),
        ("Closed-form/oracle agreement", closed_forms),
        ("Estimator theorems", estimators),
        ("Algebraic identity suite", identities),
        ("Regression identity", regression),
        ("Tail-crossing analysis", crossings),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let mut t = Tally::default();
        run(&mut t);
        let secs = start.elapsed().as_secs_f64();
        if t.failures.is_empty() {
            println!("PASS  {name} ({} checks, {secs:.2}s)", t.checks);
        } else {
            failed += 1;
            println!(
                "FAIL  {name} ({}/{} checks failed, {secs:.2}s): {}",
                t.failures.len(),
                t.checks,
                t.failures.join("; ")
            );
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
