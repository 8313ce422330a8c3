use super::{ln_factorial, BIG};

/// Associated Laguerre polynomial `L_m^{(q)}(v)` by the upward recurrence
/// `(k+1) L_{k+1} = (2k+1+q-v) L_k - (k+q) L_{k-1}`.
pub fn laguerre_assoc(m: usize, q: f64, v: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..m {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + q - v) * cur - (kf + q) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Normalized Laguerre function
/// `sqrt(m!/(m+q)!) e^{-v/2} v^{q/2} L_m^{(q)}(v)`, bounded by one in magnitude.
pub fn laguerre_fn(m: usize, q: usize, v: f64) -> f64 {
    let mut row = vec![0.0; m + 1];
    laguerre_fn_row(q, v, &mut row);
    row[m]
}

/// Writes the normalized Laguerre functions for k = 0..out.len() into `out`.
pub fn laguerre_fn_row(q: usize, v: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    let qf = q as f64;
    let mut log_scale = -0.5 * v - 0.5 * ln_factorial(q);
    if q > 0 {
        log_scale += 0.5 * qf * v.ln();
    }
    let mut prev = 0.0;
    let mut cur = 1.0;
    out[0] = log_scale.exp();
    for k in 0..out.len() - 1 {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + qf - v) * cur - (kf * (kf + qf)).sqrt() * prev)
            / ((kf + 1.0) * (kf + 1.0 + qf)).sqrt();
        prev = cur;
        cur = next;
        if cur.abs() > BIG {
            prev /= BIG;
            cur /= BIG;
            log_scale += BIG.ln();
        }
        out[k + 1] = cur * log_scale.exp();
    }
}
