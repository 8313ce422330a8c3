use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use serde::{Deserialize, Serialize};

use super::PotentialSpec;
use crate::quad::integrate_panels;
use crate::Result;

/// Near-edge coupling `V(1) = bracket * integral` in units of `hbar omega`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingEstimate {
    pub potential: String,
    pub m: usize,
    pub p: usize,
    /// Strength prefactor in units of `hbar omega`.
    pub bracket: f64,
    /// Dimensionless `u`-integral from 1 to infinity.
    pub integral: f64,
    pub v1: f64,
}

/// Leading cosine term of the asymptotic element, split into its strength
/// prefactor and shape integral. The `sqrt(m) + sqrt(p)` term is dropped.
pub fn estimate_v1(pot: &PotentialSpec, m: usize, p: usize) -> Result<CouplingEstimate> {
    let s = pot.scale();
    let bracket = s * pot.alpha / (PI * PI * SQRT_2 * pot.hbar_omega);
    let shape = |kappa: f64| pot.v_eff(pot.alpha * kappa) / s;
    let dk = (m as f64).sqrt() - (p as f64).sqrt();
    let f = |u: f64| (-0.25 * u * u).exp() / u * shape(u * FRAC_1_SQRT_2) * (u * dk).cos();
    let panels = (12.0 * (1.0 + dk.abs())).ceil() as usize;
    let breaks: Vec<f64> = (0..=panels).map(|i| 1.0 + 12.0 * i as f64 / panels as f64).collect();
    let integral = integrate_panels(f, &breaks, 1e-14, 1e-12)?.value;
    Ok(CouplingEstimate { potential: pot.kind_name().into(), m, p, bracket, integral, v1: bracket * integral })
}
