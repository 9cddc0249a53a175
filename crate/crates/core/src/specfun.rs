//! Numerical kernels: Euler's constant, the exponential integral, adaptive
//! Gauss–Kronrod quadrature over finite and infinite intervals, and
//! bisection root finding.
//!
//! The quadrature and root finder double as the verification oracle for the
//! closed-form distribution parameters in [`crate::distlib`].

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Default absolute tolerance for quadrature and root finding.
pub const DEFAULT_TOL: f64 = 1e-10;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// The Euler–Mascheroni constant.
pub fn euler_gamma() -> f64 {
    EULER_GAMMA
}

/// Exponential integral `E1(x) = ∫_x^∞ e^{-t}/t dt` for `x > 0`.
///
/// Power series about zero for `x <= 1`, continued fraction (modified Lentz)
/// above.
pub fn e1(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("E1 needs a finite x > 0, got {x}")));
    }
    if x <= 1.0 {
        Ok(e1_series(x))
    } else {
        Ok(e1_continued_fraction(x))
    }
}

/// `Ei(x)` for negative arguments, via `Ei(-z) = -E1(z)`.
pub fn ei_neg(x: f64) -> Result<f64> {
    if !(x < 0.0) {
        return Err(Error::domain(format!(
            "Ei is only provided for negative arguments, got {x}"
        )));
    }
    Ok(-e1(-x)?)
}

/// `e^x·E1(x)` for `x > 0`, without the overflow/underflow of forming the
/// two factors separately at large `x`.
pub fn e1_scaled(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("E1 needs a finite x > 0, got {x}")));
    }
    if x <= 1.0 {
        Ok(e1_series(x) * x.exp())
    } else {
        Ok(e1_continued_fraction_scaled(x))
    }
}

fn e1_series(x: f64) -> f64 {
    // E1(x) = -γ - ln x - Σ_{k≥1} (-x)^k / (k·k!)
    let mut sum = 0.0;
    let mut power = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        power *= -x / kf;
        let term = power / kf;
        sum -= term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - x.ln() + sum
}

fn e1_continued_fraction(x: f64) -> f64 {
    e1_continued_fraction_scaled(x) * (-x).exp()
}

fn e1_continued_fraction_scaled(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

/// Integration interval and stopping rule for [`integrate`].
///
/// Either bound may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub lower: f64,
    pub upper: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl QuadratureSpec {
    pub fn new(lower: f64, upper: f64) -> Self {
        QuadratureSpec {
            lower,
            upper,
            abs_tol: DEFAULT_TOL,
            max_subdivisions: 4000,
        }
    }

    pub fn with_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_max_subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.lower.is_nan() || self.upper.is_nan() || !(self.lower < self.upper) {
            return Err(Error::domain(format!(
                "quadrature bounds must satisfy lower < upper, got [{}, {}]",
                self.lower, self.upper
            )));
        }
        if !(self.abs_tol > 0.0) {
            return Err(Error::domain("quadrature tolerance must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::domain("max_subdivisions must be positive"));
        }
        Ok(())
    }
}

/// Integrates `f` over `spec`'s interval with globally adaptive 15-point
/// Gauss–Kronrod refinement.
///
/// Infinite bounds are mapped onto a finite interval first:
/// `x = a + t/(1-t)` for `[a, ∞)`, `x = b - (1-t)/t` for `(-∞, b]` and
/// `x = t/(1-t²)` for the whole line. The integrand is never evaluated at
/// the interval endpoints, so integrable endpoint singularities are fine.
pub fn integrate<F>(f: F, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    spec.validate()?;
    let (a, b) = (spec.lower, spec.upper);
    // Nodes that round onto an infinite endpoint contribute nothing.
    match (a.is_finite(), b.is_finite()) {
        (true, true) => adaptive(&f, a, b, spec),
        (true, false) => adaptive(
            &|t: f64| {
                let s = 1.0 - t;
                let x = a + t / s;
                if x.is_finite() {
                    f(x) / (s * s)
                } else {
                    0.0
                }
            },
            0.0,
            1.0,
            spec,
        ),
        (false, true) => adaptive(
            &|t: f64| {
                let x = b - (1.0 - t) / t;
                if x.is_finite() {
                    f(x) / (t * t)
                } else {
                    0.0
                }
            },
            0.0,
            1.0,
            spec,
        ),
        (false, false) => adaptive(
            &|t: f64| {
                let s = 1.0 - t * t;
                let x = t / s;
                if x.is_finite() {
                    f(x) * (1.0 + t * t) / (s * s)
                } else {
                    0.0
                }
            },
            -1.0,
            1.0,
            spec,
        ),
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

fn adaptive<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let first = gauss_kronrod(f, a, b);
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Segment> = Vec::new();
    let mut total_error = first.error;
    let mut total_value = first.value;
    heap.push(first);
    let mut subdivisions = 1usize;

    loop {
        if !total_value.is_finite() || !total_error.is_finite() {
            return Err(Error::Quadrature {
                estimate: total_value,
                abs_error: total_error,
            });
        }
        let floor = 50.0 * f64::EPSILON * total_value.abs();
        if total_error <= spec.abs_tol.max(floor) {
            break;
        }
        let Some(worst) = heap.pop() else {
            break;
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            frozen.push(worst);
            continue;
        }
        if subdivisions >= spec.max_subdivisions {
            heap.push(worst);
            return Err(Error::Quadrature {
                estimate: sum_values(&heap, &frozen),
                abs_error: total_error,
            });
        }
        let left = gauss_kronrod(f, worst.a, mid);
        let right = gauss_kronrod(f, mid, worst.b);
        total_error += left.error + right.error - worst.error;
        total_value += left.value + right.value - worst.value;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }

    let value = sum_values(&heap, &frozen);
    let error: f64 = heap.iter().chain(frozen.iter()).map(|s| s.error).sum();
    let floor = 50.0 * f64::EPSILON * value.abs();
    if !value.is_finite() || error > spec.abs_tol.max(floor) {
        return Err(Error::Quadrature {
            estimate: value,
            abs_error: error,
        });
    }
    Ok(value)
}

fn sum_values(heap: &BinaryHeap<Segment>, frozen: &[Segment]) -> f64 {
    // Sum in position order so the result does not depend on heap layout.
    let mut segments: Vec<&Segment> = heap.iter().chain(frozen.iter()).collect();
    segments.sort_by(|l, r| l.a.total_cmp(&r.a));
    segments.iter().map(|s| s.value).sum()
}

/// Bisection on a sign-changing bracket `[lo, hi]`; stops once the bracket is
/// narrower than `tol` and returns its midpoint.
pub fn find_root<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::domain(format!(
            "root bracket needs lo < hi and tol > 0, got [{lo}, {hi}], tol {tol}"
        )));
    }
    let (mut lo, mut hi) = (lo, hi);
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if !(f_lo * f_hi < 0.0) {
        return Err(Error::NoBracket { lo, hi });
    }
    while hi - lo >= tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
