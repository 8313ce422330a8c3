//! Real-space and momentum densities assembled from the occupation matrix,
//! the IM1 momentum/density duality, and Friedel-oscillation metrics.

mod friedel;
mod io;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::occupations::{occupation_matrix, OccupationMatrix};
use crate::quad::trapezoid;
use crate::specfun::psi_row_into;
use crate::trapmodel::{InteractionModel, TrapConfig};
use crate::{Error, Result};

pub use friedel::{friedel_metrics, friedel_metrics_against, FriedelMetrics};
pub use io::{emit_figure_data, profile_to_csv, FigureBundle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKind {
    Density,
    Momentum,
}

/// Uniform grid `start + k * step`, k = 0..points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub step: f64,
    pub points: usize,
}

impl Grid {
    /// `points` samples covering `[lo, hi]` inclusive.
    pub fn new(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if points < 2 || !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidInput(format!("bad grid [{lo}, {hi}] with {points} points")));
        }
        Ok(Grid { start: lo, step: (hi - lo) / (points - 1) as f64, points })
    }

    /// `[-1.5 sqrt(2N-1), 1.5 sqrt(2N-1)]` with 2048 points.
    pub fn default_for(trap: &TrapConfig) -> Self {
        let w = 1.5 * trap.fermi_width();
        Grid::new(-w, w, 2048).expect("positive width")
    }

    /// Wide grid reaching well into the forbidden region, for sum rules:
    /// `|v| <= sqrt(2 n_max) + 8` with spacing at most 0.05.
    pub fn wide_for(n_max: usize) -> Self {
        let w = (2.0 * n_max as f64).sqrt() + 8.0;
        let points = (2.0 * w / 0.05).ceil() as usize + 1;
        Grid::new(-w, w, points).expect("positive width")
    }

    pub fn coord(&self, k: usize) -> f64 {
        self.start + self.step * k as f64
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.points).map(|k| self.coord(k)).collect()
    }

    pub fn end(&self) -> f64 {
        self.coord(self.points - 1)
    }
}

/// A sampled dimensionless profile: `n l` against `v = z/l` or `p alpha` against `kappa = k/alpha`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub kind: ProfileKind,
    #[serde(rename = "N")]
    pub n: usize,
    pub model_id: String,
    pub grid: Grid,
    pub values: Vec<f64>,
    /// Trapezoid estimate of the particle number.
    pub integral: f64,
    /// Set when the spacing exceeds a quarter of the Friedel period.
    pub coarse_grid: bool,
}

impl Profile {
    pub fn coords(&self) -> Vec<f64> {
        self.grid.coords()
    }

    /// Most negative value, if any value is negative.
    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Friedel period `pi / sqrt(2N - 1)` in oscillator units.
pub fn friedel_period(trap: &TrapConfig) -> f64 {
    std::f64::consts::PI / trap.fermi_width()
}

fn assemble(trap: &TrapConfig, occ: &OccupationMatrix, grid: &Grid, kind: ProfileKind) -> Result<Profile> {
    if occ.n != trap.n() {
        return Err(Error::InvalidInput(format!("matrix built for N={}, trap has N={}", occ.n, trap.n())));
    }
    let top = occ.m_max;
    let entries: Vec<(usize, usize, f64)> = occ.entries().filter(|e| e.2 != 0.0).collect();
    let values: Vec<f64> = (0..grid.points)
        .into_par_iter()
        .map_init(
            || vec![0.0; top + 1],
            |psi, k| {
                psi_row_into(grid.coord(k), psi);
                let mut total = 0.0;
                for &(m, p, v) in &entries {
                    if p == 0 {
                        total += psi[m] * psi[m] * v;
                    } else {
                        let sign = if kind == ProfileKind::Momentum && p % 2 == 1 { -2.0 } else { 2.0 };
                        total += sign * psi[m - p] * psi[m + p] * v;
                    }
                }
                total
            },
        )
        .collect();
    Ok(Profile {
        kind,
        n: trap.n(),
        model_id: occ.model_id.clone(),
        integral: trapezoid(&values, grid.step),
        coarse_grid: grid.step > 0.25 * friedel_period(trap),
        grid: *grid,
        values,
    })
}

/// Real-space density `n(v) l` from the occupation matrix.
pub fn density(trap: &TrapConfig, occ: &OccupationMatrix, grid: &Grid) -> Result<Profile> {
    assemble(trap, occ, grid, ProfileKind::Density)
}

/// Momentum density `p(kappa) alpha`: the density formula with `(-1)^p` on
/// off-diagonal terms.
pub fn momentum(trap: &TrapConfig, occ: &OccupationMatrix, grid: &Grid) -> Result<Profile> {
    assemble(trap, occ, grid, ProfileKind::Momentum)
}

/// Free-gas density `sum_{n<N} psi_n^2` on a grid.
pub fn free_density(trap: &TrapConfig, grid: &Grid) -> Profile {
    let n = trap.n();
    let values: Vec<f64> = (0..grid.points)
        .into_par_iter()
        .map_init(|| vec![0.0; n], |psi, k| {
            psi_row_into(grid.coord(k), psi);
            psi.iter().map(|v| v * v).sum()
        })
        .collect();
    Profile {
        kind: ProfileKind::Density,
        n,
        model_id: InteractionModel::Free.model_id(),
        integral: trapezoid(&values, grid.step),
        coarse_grid: grid.step > 0.25 * friedel_period(trap),
        grid: *grid,
        values,
    }
}

pub const DUALITY_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualityReport {
    pub alpha1: f64,
    pub v1: f64,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// `max |p(kappa; alpha_1) - n(kappa; -alpha_1)|` over the grid, in IM1 with `M_max`.
pub fn duality_check(trap: &TrapConfig, alpha1: f64, grid: &Grid, m_max: usize) -> Result<DualityReport> {
    let plus = InteractionModel::im1_from_alpha(alpha1);
    let minus = InteractionModel::im1_from_alpha(-alpha1);
    let p = momentum(trap, &occupation_matrix(trap, &plus, m_max)?, grid)?;
    let n = density(trap, &occupation_matrix(trap, &minus, m_max)?, grid)?;
    let max_deviation = p.values.iter().zip(&n.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let InteractionModel::Im1 { v1 } = plus else { unreachable!() };
    Ok(DualityReport {
        alpha1,
        v1,
        max_deviation,
        tolerance: DUALITY_TOLERANCE,
        passed: max_deviation <= DUALITY_TOLERANCE,
    })
}

/// [`duality_check`] parameterised by `V(1)/hbar omega` instead of `alpha_1`.
pub fn duality_check_v1(trap: &TrapConfig, v1: f64, grid: &Grid, m_max: usize) -> Result<DualityReport> {
    let c = crate::trapmodel::coupling_at(&InteractionModel::Im1 { v1 }, 1)?;
    duality_check(trap, c.alpha_m, grid, m_max)
}
