//! Closed forms for the two interaction models and the first-order expansion.

use crate::quad::{periodic_trapezoid, QuadResult};
use crate::specfun::{bessel_i_scaled, dirichlet_fourier, dirichlet_kernel};
use crate::trapmodel::{coupling_at, gamma_from_alpha, InteractionModel, TrapConfig};
use crate::{Error, Result};

use super::grid::{cos_table, initial_nodes, PeriodicGrid};
use super::{half_index, QuadSettings};

/// `(gamma_1, alpha_1)` for a model whose only coupled mode is m=1.
pub(crate) fn single_mode(model: &InteractionModel) -> Result<(f64, f64)> {
    match model.support() {
        Some(0) => Ok((0.0, 0.0)),
        Some(1) => {
            let c = coupling_at(model, 1)?;
            // gamma from |alpha| keeps the alpha -> -alpha map exact
            Ok((gamma_from_alpha(c.alpha_m), c.alpha_m))
        }
        _ => Err(Error::InvalidInput(format!(
            "closed IM1 form needs a model coupled at m=1 only, got {}",
            model.model_id()
        ))),
    }
}

fn check_indices(m: usize, p: usize) -> Result<()> {
    if p > m {
        return Err(Error::InvalidInput(format!("need M - p >= 0, got M={m}, p={p}")));
    }
    Ok(())
}

/// `<c+_{M-p} c_{M+p}>` for a single-mode model, with quadrature diagnostics.
pub fn occ_im1_detailed(trap: &TrapConfig, model: &InteractionModel, m: usize, p: usize, settings: &QuadSettings) -> Result<QuadResult> {
    check_indices(m, p)?;
    let (gamma, alpha) = single_mode(model)?;
    im1_integral(trap.n(), gamma, alpha, m, p, settings)
}

pub(crate) fn im1_integral(n: usize, gamma: f64, alpha: f64, m: usize, p: usize, settings: &QuadSettings) -> Result<QuadResult> {
    let a = half_index(m, n);
    let delta = if p == 0 { 0.5 } else { 0.0 };
    if alpha == 0.0 && gamma == 0.0 {
        let v = if p == 0 { 0.5 - dirichlet_fourier(a, 0) } else { 0.0 };
        return Ok(QuadResult { value: v, error: 0.0, nodes: 0 });
    }
    let f = |s: f64| {
        let h = 0.5 * s;
        let x = 2.0 * (h.sin() * h.sin());
        let arg = 2.0 * alpha * x;
        dirichlet_kernel(a, s) * ((arg.abs() - 2.0 * gamma * x).exp() * bessel_i_scaled(p, arg))
    };
    let n_min = initial_nodes(a, p, 16);
    let r = periodic_trapezoid(f, n_min, settings.tol * 2.0 * std::f64::consts::PI, settings.max_nodes)?;
    let scale = 1.0 / (2.0 * std::f64::consts::PI);
    Ok(QuadResult { value: delta - r.value * scale, error: r.error * scale, nodes: r.nodes })
}

/// IM1 occupation-matrix element `<c+_{M-p} c_{M+p}>`.
pub fn occ_im1(trap: &TrapConfig, model: &InteractionModel, m: usize, p: usize) -> Result<f64> {
    Ok(occ_im1_detailed(trap, model, m, p, &QuadSettings::default())?.value)
}

/// IM2 parameters `(gamma0, alpha0, Z_gamma, Z_alpha)`.
pub(crate) fn im2_params(model: &InteractionModel) -> Result<(f64, f64, f64, f64)> {
    match model {
        InteractionModel::Free => Ok((0.0, 0.0, 1.0, 1.0)),
        InteractionModel::Im2 { gamma0, sign, r_gamma, r_alpha } => {
            if !(*r_gamma > 0.0 && *r_alpha > 0.0) {
                return Err(Error::Domain(format!(
                    "IM2 needs positive decay rates, got r_gamma={r_gamma}, r_alpha={r_alpha}"
                )));
            }
            let c = coupling_at(model, 1)?;
            let alpha0 = f64::from(*sign) * (gamma0 * (1.0 + gamma0)).sqrt();
            Ok((*gamma0, alpha0, c.z_gamma.unwrap(), c.z_alpha.unwrap()))
        }
        _ => Err(Error::InvalidInput(format!("IM2 form needs an IM2 model, got {}", model.model_id()))),
    }
}

/// Integrand of the IM2 double integral on an `n x n` shared grid.
pub(crate) fn im2_grid(gamma0: f64, alpha0: f64, z_gamma: f64, z_alpha: f64, n: usize) -> PeriodicGrid {
    let cos = cos_table(n);
    let ln_a: Vec<f64> = cos.iter().map(|c| (1.0 + z_alpha - c).ln()).collect();
    let ln_g: Vec<f64> = cos.iter().map(|c| gamma0 * (z_gamma.ln() - (1.0 + z_gamma - c).ln())).collect();
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let plus = ln_a[(j + i) % n];
            let minus = ln_a[(j + n - i) % n];
            values[i * n + j] = (ln_g[i] - alpha0 * ln_a[j] + 0.5 * alpha0 * (plus + minus)).exp();
        }
    }
    PeriodicGrid { n, values }
}

/// Evaluates a batch of `(M, p)` entries on a doubling sequence of shared
/// grids until every estimated error is below tolerance.
pub(crate) fn grid_entries<B>(n_particles: usize, indices: &[(usize, usize)], floor: usize, settings: &QuadSettings, build: B, context: &str) -> Result<(Vec<QuadResult>, usize)>
where
    B: Fn(usize) -> PeriodicGrid,
{
    let a_max = indices.iter().map(|&(m, _)| half_index(m, n_particles).abs()).fold(0.5, f64::max);
    let p_max = indices.iter().map(|&(_, p)| p).max().unwrap_or(0);
    let mut n = initial_nodes(a_max, p_max, floor);
    loop {
        let grid = build(n);
        let cos = cos_table(n);
        let mut out = Vec::with_capacity(indices.len());
        let mut outer_cache: Vec<Option<(Vec<f64>, Vec<f64>)>> = vec![None; p_max + 1];
        for &(m, p) in indices {
            let (gf, gc) = outer_cache[p].get_or_insert_with(|| grid.outer(p, &cos));
            let (fine, coarse) = grid.integral(half_index(m, n_particles), gf, gc);
            let floor = 64.0 * f64::EPSILON * fine.abs().max(1.0);
            let delta = if p == 0 { 0.5 } else { 0.0 };
            out.push(QuadResult { value: delta - fine, error: (fine - coarse).abs().max(floor), nodes: n * n });
        }
        let worst = out.iter().map(|r| r.error).fold(0.0, f64::max);
        if worst <= settings.tol {
            return Ok((out, n));
        }
        if n * 2 > settings.max_grid {
            return Err(Error::NonConvergence { context: context.to_string(), error: worst, work: n * n });
        }
        n *= 2;
    }
}

/// IM2 element with quadrature diagnostics.
pub fn occ_im2_detailed(trap: &TrapConfig, model: &InteractionModel, m: usize, p: usize, settings: &QuadSettings) -> Result<QuadResult> {
    check_indices(m, p)?;
    let (g0, a0, zg, za) = im2_params(model)?;
    let (r, _) = grid_entries(trap.n(), &[(m, p)], 128, settings, |n| im2_grid(g0, a0, zg, za, n), "IM2 double integral")?;
    Ok(r[0])
}

/// IM2 occupation-matrix element `<c+_{M-p} c_{M+p}>`.
pub fn occ_im2(trap: &TrapConfig, model: &InteractionModel, m: usize, p: usize) -> Result<f64> {
    Ok(occ_im2_detailed(trap, model, m, p, &QuadSettings::default())?.value)
}

/// `d <c+_{M-p} c_{M+p}> / d alpha_1` at zero coupling.
///
/// Only p = 1 is non-zero: `-(1/2pi) int D_a(s) (1 - cos s) ds`, which is
/// `-sgn(a)/2` at `|a| = 1/2` and zero otherwise.
pub fn first_order_slope(trap: &TrapConfig, m: usize, p: usize) -> f64 {
    if p != 1 {
        return 0.0;
    }
    let a = half_index(m, trap.n());
    -(dirichlet_fourier(a, 0) - dirichlet_fourier(a, 1))
}

/// First-order expansion in `V_b(1)` with `V_a(1) = 0`, where `alpha_1 ~ V_b(1)/2`.
pub fn occ_first_order(trap: &TrapConfig, vb1: f64, m: usize, p: usize) -> f64 {
    let free = if p == 0 && m < trap.n() { 1.0 } else { 0.0 };
    free + 0.5 * vb1 * first_order_slope(trap, m, p)
}
