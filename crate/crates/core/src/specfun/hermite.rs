use serde::Serialize;

use super::BIG;

/// `psi_n(x) * sqrt(l)` for n = 0..=n_max at the dimensionless point `x = alpha z`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HermiteFunctionTable {
    pub n_max: usize,
    pub x: f64,
    pub values: Vec<f64>,
}

/// Normalized oscillator functions via the three-term recurrence
/// `psi_{n+1} = x sqrt(2/(n+1)) psi_n - sqrt(n/(n+1)) psi_{n-1}`.
///
/// The Gaussian is carried as a separate log scale, so points far outside
/// the classical region underflow to zero instead of producing NaN.
pub fn psi_row(n_max: usize, x: f64) -> HermiteFunctionTable {
    let mut values = vec![0.0; n_max + 1];
    psi_row_into(x, &mut values);
    HermiteFunctionTable { n_max, x, values }
}

/// Same as [`psi_row`], writing `out.len()` values into `out`.
pub fn psi_row_into(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    let mut log_scale = -0.5 * x * x;
    let mut prev = 0.0;
    let mut cur = std::f64::consts::PI.powf(-0.25);
    out[0] = cur * log_scale.exp();
    for n in 0..out.len() - 1 {
        let nf = n as f64;
        let next = x * (2.0 / (nf + 1.0)).sqrt() * cur - (nf / (nf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > BIG {
            prev /= BIG;
            cur /= BIG;
            log_scale += BIG.ln();
        }
        out[n + 1] = cur * log_scale.exp();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Signed, ToPrimitive, Zero};

    /// Exact `psi_n(a/b)` up to the final f64 rounding: `G_n = b^n H_n(a/b)`
    /// satisfies `G_{n+1} = 2a G_n - 2n b^2 G_{n-1}`.
    fn oracle(n_max: usize, a: i64, b: i64) -> Vec<f64> {
        let (a_big, b_big) = (BigInt::from(a), BigInt::from(b));
        let b2 = &b_big * &b_big;
        let mut g_prev = BigInt::zero();
        let mut g = BigInt::one();
        let mut norm = BigInt::one(); // b^{2n} 2^n n!
        let x = a as f64 / b as f64;
        let gauss = (-0.5 * x * x).exp() * std::f64::consts::PI.powf(-0.25);
        let mut out = Vec::new();
        for n in 0..=n_max {
            let r = BigRational::new(&g * &g, norm.clone());
            let mag = r.to_f64().unwrap().sqrt() * gauss;
            out.push(if g.is_negative() { -mag } else { mag });
            let next = BigInt::from(2) * &a_big * &g - BigInt::from(2 * n as i64) * &b2 * &g_prev;
            g_prev = std::mem::replace(&mut g, next);
            norm *= &b2 * BigInt::from(2 * (n as i64 + 1));
        }
        out
    }

    #[test]
    fn ground_state_normalization() {
        let t = psi_row(0, 0.0);
        assert!((t.values[0] - 0.751_125_544_464_942_5).abs() < 1e-15);
        let t = psi_row(3, 0.0);
        assert_eq!(t.values[1], 0.0);
        assert_eq!(t.values[3], 0.0);
    }

    #[test]
    fn matches_exact_rational_at_two() {
        let t = psi_row(50, 2.0);
        let exact = oracle(50, 2, 1);
        for (n, (v, e)) in t.values.iter().zip(&exact).enumerate() {
            assert!((v - e).abs() <= 1e-12 * e.abs(), "n={n}: {v} vs {e}");
        }
    }

    #[test]
    fn matches_oracle_across_classical_region() {
        // n <= 200, x sampled out to the turning point sqrt(400) = 20
        for (a, b) in [(0, 1), (1, 3), (37, 10), (-71, 10), (123, 10), (199, 10), (-20, 1)] {
            let x = a as f64 / b as f64;
            let t = psi_row(200, x);
            let exact = oracle(200, a, b);
            for (n, (v, e)) in t.values.iter().zip(&exact).enumerate() {
                assert!((v - e).abs() <= 1e-10 * e.abs() + 1e-14, "x={x} n={n}: {v} vs {e}");
            }
        }
    }

    #[test]
    fn parity() {
        let p = psi_row(40, 1.7);
        let m = psi_row(40, -1.7);
        for n in 0..=40 {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(m.values[n], sign * p.values[n]);
        }
    }

    #[test]
    fn no_overflow_at_large_order() {
        let n_max = 10_000;
        let edge = (2.0 * n_max as f64).sqrt() + 10.0;
        for x in [0.0, 50.0, 141.0, edge, -edge, 1e4] {
            let t = psi_row(n_max, x);
            assert!(t.values.iter().all(|v| v.is_finite() && v.abs() < 1.0), "x={x}");
        }
        // inside the classical region the top function is of order n^{-1/4}
        let t = psi_row(n_max, 10.0);
        assert!(t.values[n_max].abs() > 1e-3);
    }

    #[test]
    fn orthonormal_and_complete() {
        let n_max = 30;
        let lim = (2.0 * n_max as f64).sqrt() + 8.0;
        let h = 0.05;
        let pts = (2.0 * lim / h).round() as usize + 1;
        let rows: Vec<Vec<f64>> = (0..pts).map(|i| psi_row(n_max, -lim + h * i as f64).values).collect();
        for m in 0..=n_max {
            for n in m..=n_max {
                let s: f64 = rows.iter().map(|r| r[m] * r[n]).sum::<f64>() * h;
                let target = if m == n { 1.0 } else { 0.0 };
                assert!((s - target).abs() < 1e-8, "({m},{n}) -> {s}");
            }
        }
        // free-gas density norm for N = 10
        let total: f64 = rows.iter().map(|r| r[..10].iter().map(|v| v * v).sum::<f64>()).sum::<f64>() * h;
        assert!((total - 10.0).abs() < 1e-8);
    }
}
