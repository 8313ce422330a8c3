use super::BIG;
use crate::{Error, Result};

/// `e^{-|x|} I_p(x)` for integer order `p`.
pub fn bessel_i_scaled(p: usize, x: f64) -> f64 {
    let ax = x.abs();
    let sign = if x < 0.0 && p % 2 == 1 { -1.0 } else { 1.0 };
    if ax == 0.0 {
        return if p == 0 { 1.0 } else { 0.0 };
    }
    if ax < 25.0 {
        return sign * i_series(p, ax) * (-ax).exp();
    }
    sign * i_miller(p, ax)
}

/// Modified Bessel function `I_p(x)` for integer order `p`.
pub fn bessel_i(p: usize, x: f64) -> f64 {
    let ax = x.abs();
    if ax < 25.0 {
        let sign = if x < 0.0 && p % 2 == 1 { -1.0 } else { 1.0 };
        if ax == 0.0 {
            return if p == 0 { 1.0 } else { 0.0 };
        }
        return sign * i_series(p, ax);
    }
    bessel_i_scaled(p, x) * ax.exp()
}

fn i_series(p: usize, x: f64) -> f64 {
    let h = 0.5 * x;
    // (x/2)^p / p! built up multiplicatively to avoid overflow of p!
    let mut term = 1.0;
    for k in 1..=p {
        term *= h / k as f64;
    }
    if term == 0.0 {
        return 0.0;
    }
    let h2 = h * h;
    let mut sum = term;
    let mut k = 0usize;
    loop {
        k += 1;
        term *= h2 / (k as f64 * (k + p) as f64);
        sum += term;
        if term <= 1e-17 * sum {
            return sum;
        }
    }
}

/// Backward recurrence normalised by `I_0 + 2 sum I_k = e^x`; returns `e^{-x} I_p(x)`.
fn i_miller(p: usize, x: f64) -> f64 {
    let top = p.max(x as usize);
    let start = top + 20 + (60.0 * top as f64).sqrt() as usize;
    let mut next = 0.0;
    let mut cur = 1e-300;
    let mut norm = 0.0;
    let mut at_p = 0.0;
    for k in (1..=start).rev() {
        let prev = 2.0 * k as f64 / x * cur + next;
        next = cur;
        cur = prev;
        norm += 2.0 * next;
        if k == p {
            at_p = next;
        }
        if cur.abs() > BIG {
            cur /= BIG;
            next /= BIG;
            norm /= BIG;
            at_p /= BIG;
        }
    }
    if p == 0 {
        at_p = cur;
    }
    norm += cur;
    at_p / norm
}

/// Bessel function of the first kind `J_n(x)` for integer order `n`.
pub fn bessel_j(n: usize, x: f64) -> f64 {
    let ax = x.abs();
    let sign = if x < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
    if ax == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    // backward recurrence normalised by J_0 + 2 sum J_{2k} = 1
    let top = n.max(ax as usize);
    let mut start = top + 20 + (60.0 * top as f64).sqrt() as usize;
    start += start % 2;
    let mut next = 0.0;
    let mut cur = 1e-300;
    let mut norm = 0.0;
    let mut at_n = 0.0;
    for k in (1..=start).rev() {
        let prev = 2.0 * k as f64 / ax * cur - next;
        next = cur;
        cur = prev;
        // `next` now holds J_k
        if k % 2 == 0 {
            norm += 2.0 * next;
        }
        if k == n {
            at_n = next;
        }
        if cur.abs() > BIG {
            cur /= BIG;
            next /= BIG;
            norm /= BIG;
            at_n /= BIG;
        }
    }
    if n == 0 {
        at_n = cur;
    }
    norm += cur;
    sign * at_n / norm
}

/// `x K_1(x)`, extended continuously by 1 at `x = 0`.
pub fn x_k1(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(1.0);
    }
    Ok(x * bessel_k1(x)?)
}

/// Modified Bessel function of the second kind `K_1(x)`, `x > 0`.
///
/// Trapezoid rule on `int_0^inf e^{-x cosh t} cosh t dt`; the integrand is
/// entire with double-exponential decay so the rule converges geometrically.
pub fn bessel_k1(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("K_1 needs x > 0, got {x}")));
    }
    let h = 0.25 / x.sqrt().max(1.0);
    let t_max = (1.0 + 40.0 / x).acosh();
    let n = (t_max / h).ceil() as usize;
    // factor out e^{-x} so large arguments do not underflow early
    let f = |t: f64| (-x * (t.cosh() - 1.0)).exp() * t.cosh();
    let mut sum = 0.5 * f(0.0);
    for k in 1..=n {
        sum += f(h * k as f64);
    }
    Ok(sum * h * (-x).exp())
}
