use mstat::regress::{exp_approx_form, fit_exp_trend, log_residuals, predict, DEFAULT_BINS};
use proptest::prelude::*;

/// Plain OLS of `z` on `x` from the raw normal equations.
fn ols(xs: &[f64], zs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sz: f64 = zs.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxz: f64 = xs.iter().zip(zs).map(|(x, z)| x * z).sum();
    let det = n * sxx - sx * sx;
    let slope = (n * sxz - sx * sz) / det;
    let intercept = (sxx * sz - sx * sxz) / det;
    (slope, intercept)
}

fn dataset() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    prop::collection::vec((-10f64..10.0, 1e-2f64..1e2), 3..30)
        .prop_filter("regressor must vary", |v| {
            let (lo, hi) = v
                .iter()
                .fold((f64::MAX, f64::MIN), |(l, h), p| (l.min(p.0), h.max(p.0)));
            hi - lo > 0.5
        })
        .prop_map(|v| v.into_iter().unzip())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

proptest! {
    #[test]
    fn matches_additive_ols((xs, ys) in dataset()) {
        let fit = fit_exp_trend(&xs, &ys).unwrap();
        let zs: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
        let (slope, intercept) = ols(&xs, &zs);
        prop_assert!((fit.alpha_hat - slope).abs() < 1e-12 * slope.abs().max(1.0) * 10.0);
        prop_assert!((fit.beta_hat - intercept).abs() < 1e-12 * intercept.abs().max(1.0) * 10.0);
    }

    #[test]
    fn scale_and_shift((xs, ys) in dataset(), c in 1e-2f64..1e2, h in -5f64..5.0) {
        let fit = fit_exp_trend(&xs, &ys).unwrap();
        let cys: Vec<f64> = ys.iter().map(|y| c * y).collect();
        let scaled = fit_exp_trend(&xs, &cys).unwrap();
        prop_assert!((scaled.alpha_hat - fit.alpha_hat).abs() < 1e-10);
        prop_assert!((scaled.beta_hat - fit.beta_hat - c.ln()).abs() < 1e-10);
        prop_assert!(rel(predict(&scaled, xs[0]), c * predict(&fit, xs[0])) < 1e-10);

        let hxs: Vec<f64> = xs.iter().map(|x| x + h).collect();
        let shifted = fit_exp_trend(&hxs, &ys).unwrap();
        prop_assert!((shifted.alpha_hat - fit.alpha_hat).abs() < 1e-10);
        prop_assert!((shifted.beta_hat - (fit.beta_hat - fit.alpha_hat * h)).abs() < 1e-9);
        prop_assert!(rel(predict(&shifted, xs[1] + h), predict(&fit, xs[1])) < 1e-10);
    }

    #[test]
    fn residual_mean_is_zero((xs, ys) in dataset()) {
        let fit = fit_exp_trend(&xs, &ys).unwrap();
        let (res, hist) = log_residuals(&fit, &xs, &ys, DEFAULT_BINS).unwrap();
        prop_assert!(hist.residual_mean.abs() < 1e-12);
        prop_assert_eq!(hist.counts.iter().sum::<usize>(), res.len());
        prop_assert!(hist.bin_edges.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn covariance_form_is_the_same_curve((xs, ys) in dataset()) {
        let fit = fit_exp_trend(&xs, &ys).unwrap();
        let form = exp_approx_form(&xs, &ys).unwrap();
        prop_assert!((form.c_g.ln() / form.x_var - fit.alpha_hat).abs() < 1e-10);
        for i in 0..10 {
            let x = -12.0 + 2.4 * i as f64;
            prop_assert!(rel(form.curve(x), predict(&fit, x)) < 1e-10);
        }
    }
}
