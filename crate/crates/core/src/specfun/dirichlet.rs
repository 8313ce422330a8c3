/// `sin(a s) / (2 sin(s/2))` for half-integer `a`, with the removable
/// singularity at `s = 0` filled in.
pub fn dirichlet_kernel(a: f64, s: f64) -> f64 {
    if s.abs() * a.abs().max(1.0) < 1e-3 {
        return a - a * (4.0 * a * a - 1.0) * s * s / 24.0;
    }
    (a * s).sin() / (2.0 * (0.5 * s).sin())
}

/// `(1/2pi) int_{-pi}^{pi} D_a(s) cos(j s) ds`: `sgn(a)/2` when `|j| <= |a| - 1/2`, else zero.
pub fn dirichlet_fourier(a: f64, j: i64) -> f64 {
    if (j.unsigned_abs() as f64) <= a.abs() - 0.5 {
        0.5 * a.signum()
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    /// `1/2 sum_{l=-k}^{k} e^{i l s}` with `a = k + 1/2`.
    fn geometric(a: f64, s: f64) -> f64 {
        let k = (a.abs() - 0.5).round() as i64;
        a.signum() * 0.5 * (-k..=k).map(|l| (l as f64 * s).cos()).sum::<f64>()
    }

    #[test]
    fn limits() {
        assert_eq!(dirichlet_kernel(3.5, 0.0), 3.5);
        assert!((dirichlet_kernel(-7.5, 1e-9) + 7.5).abs() < 1e-12);
        for s in [-3.0, -0.1, 0.0, 1e-7, 2.0, PI] {
            assert!((dirichlet_kernel(0.5, s) - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn matches_geometric_sum() {
        let s = PI / 3.0;
        assert!((dirichlet_kernel(2.5, s) - geometric(2.5, s)).abs() < 1e-15);
        for a in [-9.5, -0.5, 1.5, 10.5, 40.5] {
            for s in [-2.9, -0.02, 0.0004, 0.7, 3.1] {
                assert!((dirichlet_kernel(a, s) - geometric(a, s)).abs() < 1e-12 * a.abs(), "a={a} s={s}");
            }
        }
    }

    #[test]
    fn fourier_coefficients_match_quadrature() {
        let n = 512;
        for a in [-4.5, -0.5, 0.5, 3.5] {
            for j in 0..7 {
                let q: f64 = (0..n)
                    .map(|k| {
                        let s = -PI + 2.0 * PI * k as f64 / n as f64;
                        dirichlet_kernel(a, s) * (j as f64 * s).cos()
                    })
                    .sum::<f64>()
                    / n as f64;
                assert!((q - dirichlet_fourier(a, j)).abs() < 1e-13, "a={a} j={j}");
            }
        }
    }

    proptest! {
        #[test]
        fn even_in_s(k in -30i32..30, s in -PI..PI) {
            let a = k as f64 + 0.5;
            prop_assert_eq!(dirichlet_kernel(a, s), dirichlet_kernel(a, -s));
        }

        #[test]
        fn taylor_branch_is_continuous(k in -200i32..200, s in 1e-7f64..1e-4) {
            let a = k as f64 + 0.5;
            prop_assert!((dirichlet_kernel(a, s) - geometric(a, s)).abs() < 1e-9 * a.abs().max(1.0));
        }
    }
}
