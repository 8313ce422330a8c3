use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::PotentialSpec;
use crate::quad::{integrate_panels, QuadResult};
use crate::specfun::{bessel_j, laguerre_fn};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementMethod {
    Exact,
    BesselAsymptotic,
    CosineAsymptotic,
}

impl fmt::Display for ElementMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Exact => "exact",
            Self::BesselAsymptotic => "bessel_asymptotic",
            Self::CosineAsymptotic => "cosine_asymptotic",
        })
    }
}

/// `V(m,p;q,n)` in units of `hbar omega`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixElement {
    pub m: usize,
    pub p: usize,
    pub q: usize,
    pub n: usize,
    pub value: f64,
    pub error: f64,
    pub method: ElementMethod,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElementSettings {
    pub rel_tol: f64,
    /// Absolute tolerance relative to the potential's magnitude scale.
    pub abs_tol: f64,
    /// Lower `u` cutoff of the cosine form.
    pub cutoff_a: f64,
}

impl Default for ElementSettings {
    fn default() -> Self {
        ElementSettings { rel_tol: 1e-10, abs_tol: 1e-13, cutoff_a: 1.0 }
    }
}

fn magnitude(pot: &PotentialSpec) -> f64 {
    [0.0, 0.5, 1.0, 2.0, 4.0]
        .iter()
        .map(|&k| pot.reduced(k).abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE)
}

fn uniform_breaks(a: f64, b: f64, width: f64) -> Vec<f64> {
    let panels = ((b - a) / width).ceil().max(1.0) as usize;
    (0..=panels).map(|i| a + (b - a) * i as f64 / panels as f64).collect()
}

fn with_context(r: Result<QuadResult>, what: String) -> Result<QuadResult> {
    r.map_err(|e| match e {
        Error::NonConvergence { context, error, work } => {
            Error::NonConvergence { context: format!("{what}: {context}"), error, work }
        }
        other => other,
    })
}

/// `i^{m+n+p+q} {(-1)^{q-p} + (-1)^{n-m}}`, real whenever it is nonzero.
fn parity_prefactor(m: usize, p: usize, q: usize, n: usize) -> f64 {
    let sign = |k: usize| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let bracket = sign(q + p) + sign(n + m);
    if bracket == 0.0 {
        return 0.0;
    }
    // m+n+p+q is even here
    bracket * sign((m + n + p + q) / 2)
}

/// Exact element by the Laguerre-product integral. Orderings with `q < m` or
/// `n < p` are mapped onto `q >= m`, `n >= p` by the symmetries of the real
/// space integral.
pub fn matrix_element_exact(pot: &PotentialSpec, m: usize, p: usize, q: usize, n: usize) -> Result<MatrixElement> {
    matrix_element_exact_with(pot, m, p, q, n, &ElementSettings::default())
}

pub fn matrix_element_exact_with(
    pot: &PotentialSpec,
    m: usize,
    p: usize,
    q: usize,
    n: usize,
    settings: &ElementSettings,
) -> Result<MatrixElement> {
    let (lo1, hi1) = (m.min(q), m.max(q));
    let (lo2, hi2) = (p.min(n), p.max(n));
    let mut element = MatrixElement { m, p, q, n, value: 0.0, error: 0.0, method: ElementMethod::Exact, warning: None };
    let pre = parity_prefactor(lo1, lo2, hi1, hi2);
    if pre == 0.0 {
        return Ok(element);
    }
    let (dq, dr) = (hi1 - lo1, hi2 - lo2);
    // v = u^2; each normalised Laguerre function dies past its turning point 4k+2Q+2
    let v_max = 4.0 * lo1.max(lo2) as f64 + 2.0 * (dq + dr) as f64 + 80.0;
    let u_max = v_max.sqrt();
    let width = PI / (2.0 * ((lo1 as f64).sqrt() + (lo2 as f64).sqrt() + 1.0));
    let breaks = uniform_breaks(0.0, u_max, width);
    let f = |u: f64| {
        let v = u * u;
        laguerre_fn(lo1, dq, v) * laguerre_fn(lo2, dr, v) * pot.reduced(SQRT_2 * u)
    };
    let scale = pre * FRAC_1_SQRT_2 / PI;
    let tol = settings.abs_tol * magnitude(pot);
    let r = with_context(
        integrate_panels(f, &breaks, tol, settings.rel_tol),
        format!("exact element ({m},{p};{q},{n}) over {} panels of width {width:.4}", breaks.len() - 1),
    )?;
    element.value = scale * r.value;
    element.error = scale.abs() * r.error;
    Ok(element)
}

fn regime_warning(m: usize, p: usize, big_q: usize) -> Option<String> {
    let need = 25 * big_q * big_q;
    (m.min(p) < need.max(1)).then(|| format!("asymptotic form used outside m, p >= 25 Q^2 = {need}"))
}

fn shifted_indices(p: usize, big_q: usize, dr: i64) -> Result<usize> {
    let r = big_q as i64 + dr;
    if r < 0 {
        return Err(Error::InvalidInput(format!("Q + dR must be non-negative, got Q={big_q}, dR={dr}")));
    }
    Ok(p + r as usize)
}

/// Cosine-asymptotic element `V(m, p; m+Q, p+Q+dR)` from the `u`-integral with
/// lower cutoff `a`.
pub fn matrix_element_asymptotic(pot: &PotentialSpec, m: usize, p: usize, big_q: usize, dr: i64) -> Result<MatrixElement> {
    matrix_element_asymptotic_with(pot, m, p, big_q, dr, &ElementSettings::default())
}

pub fn matrix_element_asymptotic_with(
    pot: &PotentialSpec,
    m: usize,
    p: usize,
    big_q: usize,
    dr: i64,
    settings: &ElementSettings,
) -> Result<MatrixElement> {
    let n = shifted_indices(p, big_q, dr)?;
    let mut element = MatrixElement {
        m,
        p,
        q: m + big_q,
        n,
        value: 0.0,
        error: 0.0,
        method: ElementMethod::CosineAsymptotic,
        warning: regime_warning(m, p, big_q),
    };
    if dr.rem_euclid(2) == 1 {
        return Ok(element);
    }
    let weight = if dr.rem_euclid(4) == 0 { 1.0 } else { -1.0 };
    let (sm, sp) = ((m as f64).sqrt(), (p as f64).sqrt());
    let flip = if big_q.is_multiple_of(2) { 1.0 } else { -1.0 };
    let f = |u: f64| {
        (-0.25 * u * u).exp() / u * pot.reduced(u * FRAC_1_SQRT_2) * ((u * (sm - sp)).cos() + flip * (u * (sm + sp)).sin())
    };
    let a = settings.cutoff_a;
    // e^{-u^2/4} < 1e-18 beyond
    let b = a.max(13.0);
    let breaks = uniform_breaks(a, b, PI / (2.0 * (sm + sp + 1.0)));
    let tol = settings.abs_tol * magnitude(pot);
    let r = with_context(
        integrate_panels(f, &breaks, tol, settings.rel_tol),
        format!("cosine element m={m} p={p} Q={big_q} dR={dr}"),
    )?;
    let scale = weight / (PI * PI * SQRT_2);
    element.value = scale * r.value;
    element.error = scale.abs() * r.error;
    Ok(element)
}

/// Intermediate Bessel form, kept for cross-checking the cosine form.
pub fn matrix_element_bessel(pot: &PotentialSpec, m: usize, p: usize, big_q: usize, dr: i64) -> Result<MatrixElement> {
    let settings = ElementSettings::default();
    let n = shifted_indices(p, big_q, dr)?;
    let big_r = n - p;
    let mut element = MatrixElement {
        m,
        p,
        q: m + big_q,
        n,
        value: 0.0,
        error: 0.0,
        method: ElementMethod::BesselAsymptotic,
        warning: regime_warning(m, p, big_q),
    };
    if (big_q + big_r) % 2 == 1 {
        return Ok(element);
    }
    // i^{Q+R} ((-1)^Q + (-1)^R) = 2 (-1)^{(Q+R)/2} (-1)^Q
    let sign = |k: usize| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let pre = 2.0 * sign((big_q + big_r) / 2) * sign(big_q);
    let (sm, sp) = ((m as f64).sqrt(), (p as f64).sqrt());
    // v = u^2, dv / sqrt(v) = 2 du
    let f = |u: f64| {
        (-u * u).exp() * pot.reduced(SQRT_2 * u) * bessel_j(big_q, 2.0 * sm * u) * bessel_j(big_r, 2.0 * sp * u)
    };
    let breaks = uniform_breaks(0.0, 6.5, PI / (4.0 * (sm + sp + 1.0)));
    let tol = settings.abs_tol * magnitude(pot);
    let r = with_context(
        integrate_panels(f, &breaks, tol, settings.rel_tol),
        format!("bessel element m={m} p={p} Q={big_q} dR={dr}"),
    )?;
    let scale = pre * FRAC_1_SQRT_2 / PI;
    element.value = scale * r.value;
    element.error = scale.abs() * r.error;
    Ok(element)
}

/// CSV with header `m,p,q,n,value,method`.
pub fn elements_to_csv(elements: &[MatrixElement]) -> String {
    let mut out = String::from("m,p,q,n,value,method\n");
    for e in elements {
        out.push_str(&format!("{},{},{},{},{:.12e},{}\n", e.m, e.p, e.q, e.n, e.value, e.method));
    }
    out
}
