//! Quadrature rules: periodic trapezoid with node doubling, adaptive
//! Gauss–Kronrod (7/15) and the sampled trapezoid.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    /// Function evaluations (trapezoid nodes or Kronrod points).
    pub nodes: usize,
}

/// Trapezoid integral over one period `[-pi, pi)` of a 2pi-periodic function.
///
/// Starts at `n_min` nodes and doubles until `|I_n - I_2n| <= tol`; the finer
/// value is returned. The error estimate is floored at the rounding level.
pub fn periodic_trapezoid<F: Fn(f64) -> f64>(f: F, n_min: usize, tol: f64, n_max: usize) -> Result<QuadResult> {
    let mut n = n_min.max(4);
    let h = |n: usize| 2.0 * PI / n as f64;
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    for k in 0..n {
        let v = f(-PI + h(n) * k as f64);
        sum += v;
        abs_sum += v.abs();
    }
    let mut coarse = sum * h(n);
    loop {
        let step = h(2 * n);
        for k in 0..n {
            let v = f(-PI + step * (2 * k + 1) as f64);
            sum += v;
            abs_sum += v.abs();
        }
        n *= 2;
        let fine = sum * h(n);
        let floor = 16.0 * f64::EPSILON * abs_sum * h(n);
        let error = (fine - coarse).abs().max(floor);
        if error <= tol || (fine - coarse).abs() <= floor {
            return Ok(QuadResult { value: fine, error, nodes: n });
        }
        if n >= n_max {
            return Err(Error::NonConvergence {
                context: "periodic trapezoid".into(),
                error,
                work: n,
            });
        }
        coarse = fine;
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

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss–Kronrod on `[a, b]`, bisecting the worst interval until the
/// summed error estimate is below `max(abs_tol, rel_tol |I|)`.
pub fn adaptive_gk15<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64, max_intervals: usize) -> Result<QuadResult> {
    let (v, e) = gk15(&f, a, b);
    let mut intervals = vec![(a, b, v, e)];
    let mut evals = 15;
    loop {
        let value: f64 = intervals.iter().map(|t| t.2).sum();
        let error: f64 = intervals.iter().map(|t| t.3).sum();
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(QuadResult { value, error, nodes: evals });
        }
        if intervals.len() >= max_intervals {
            return Err(Error::NonConvergence {
                context: format!("adaptive Gauss-Kronrod on [{a}, {b}]"),
                error,
                work: evals,
            });
        }
        let worst = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap();
        let (lo, hi, _, _) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        evals += 30;
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
}

/// Adaptive Gauss–Kronrod on each panel `[breaks[i], breaks[i+1]]`, summed.
pub fn integrate_panels<F: Fn(f64) -> f64>(f: F, breaks: &[f64], abs_tol: f64, rel_tol: f64) -> Result<QuadResult> {
    let panels = breaks.len().saturating_sub(1).max(1);
    let mut total = QuadResult { value: 0.0, error: 0.0, nodes: 0 };
    for w in breaks.windows(2) {
        let r = adaptive_gk15(&f, w[0], w[1], abs_tol / panels as f64, rel_tol, 200)?;
        total.value += r.value;
        total.error += r.error;
        total.nodes += r.nodes;
    }
    Ok(total)
}

/// Trapezoid rule on uniformly spaced samples.
pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => h * (values[1..n - 1].iter().sum::<f64>() + 0.5 * (values[0] + values[n - 1])),
    }
}
