//! Shared 2D periodic grid used by the IM2 closed form and the generic
//! W-series path: `F(s_i, t_j)` on `theta_k = 2 pi k / n`, with entries
//! obtained as `(1/n^2) sum_ij D_a(s_i) cos(p t_j) F_ij`.

use std::f64::consts::PI;

use crate::specfun::dirichlet_kernel;

pub(crate) struct PeriodicGrid {
    pub n: usize,
    /// Row-major `F[i * n + j]`, `i` the s index and `j` the t index.
    pub values: Vec<f64>,
}

pub(crate) fn theta(n: usize, k: usize) -> f64 {
    2.0 * PI * k as f64 / n as f64
}

/// Node on `[-pi, pi)` representing `theta_k`.
pub(crate) fn centered(n: usize, k: usize) -> f64 {
    let t = theta(n, k);
    if t >= PI {
        t - 2.0 * PI
    } else {
        t
    }
}

pub(crate) fn cos_table(n: usize) -> Vec<f64> {
    (0..n).map(|k| theta(n, k).cos()).collect()
}

impl PeriodicGrid {
    /// Outer t-sums `G_p(s_i) = (1/n) sum_j F_ij cos(p t_j)` on the full grid and
    /// on the even-index half grid.
    pub fn outer(&self, p: usize, cos: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = self.n;
        let mut fine = vec![0.0; n];
        let mut coarse = vec![0.0; n / 2];
        for i in 0..n {
            let row = &self.values[i * n..(i + 1) * n];
            let mut all = 0.0;
            let mut even = 0.0;
            for (j, f) in row.iter().enumerate() {
                let term = f * cos[(p * j) % n];
                all += term;
                if j % 2 == 0 {
                    even += term;
                }
            }
            fine[i] = all / n as f64;
            if i % 2 == 0 {
                coarse[i / 2] = 2.0 * even / n as f64;
            }
        }
        (fine, coarse)
    }

    /// The double integral on the full grid and on the half grid.
    pub fn integral(&self, a: f64, g_fine: &[f64], g_coarse: &[f64]) -> (f64, f64) {
        let n = self.n;
        let mut fine = 0.0;
        let mut coarse = 0.0;
        for i in 0..n {
            let d = dirichlet_kernel(a, centered(n, i));
            fine += d * g_fine[i];
            if i % 2 == 0 {
                coarse += d * g_coarse[i / 2];
            }
        }
        (fine / n as f64, 2.0 * coarse / n as f64)
    }
}

/// Smallest power of two that is at least `16 max(|a|, p, 8)` and at least `floor`.
pub(crate) fn initial_nodes(a_max: f64, p_max: usize, floor: usize) -> usize {
    let want = (16.0 * a_max.abs().max(p_max as f64).max(8.0)).ceil() as usize;
    want.max(floor).next_power_of_two()
}
