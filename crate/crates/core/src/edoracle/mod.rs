//! Exact diagonalization of the truncated fermionic Hamiltonian with the
//! solvable density–density interaction, used as an independent check of the
//! occupation matrix.

mod basis;
mod eigen;
mod hamiltonian;

use rayon::prelude::*;
use serde::Serialize;

use crate::occupations::{occupation_matrix, OccupationMatrix};
use crate::trapmodel::{InteractionModel, TrapConfig};
use crate::{Error, Result};

pub use basis::FockBasis;
pub use eigen::{ground_state, ground_state_dense, ground_state_lanczos, GroundState, DENSE_LIMIT, RESIDUAL_TOLERANCE};
pub use hamiltonian::{build_hamiltonian, ManyBodyOperator};

/// One-body reduced density matrix `<c+_i c_j>` over the basis levels.
#[derive(Clone, Debug, Serialize)]
pub struct OneBodyMatrix {
    pub lo: i64,
    pub hi: i64,
    /// Row-major, indexed by `level - lo`.
    pub values: Vec<f64>,
    pub trace: f64,
}

impl OneBodyMatrix {
    fn size(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    /// `<c+_i c_j>` for physical levels `i`, `j`; `None` outside the range.
    pub fn get(&self, i: i64, j: i64) -> Option<f64> {
        let r = self.lo..=self.hi;
        (r.contains(&i) && r.contains(&j)).then(|| self.values[(i - self.lo) as usize * self.size() + (j - self.lo) as usize])
    }

    /// Largest `|<c+_i c_j>|` with `i - j` odd.
    pub fn odd_difference_max(&self) -> f64 {
        let n = self.size();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|(i, j)| (i + j) % 2 == 1)
            .map(|(i, j)| self.values[i * n + j].abs())
            .fold(0.0, f64::max)
    }
}

/// `<x| c+_i c_j |x>` for a normalised state vector.
pub fn one_body_matrix(state: &[f64], basis: &FockBasis) -> Result<OneBodyMatrix> {
    if state.len() != basis.dim() {
        return Err(Error::InvalidInput(format!("state has {} components, basis {}", state.len(), basis.dim())));
    }
    let n = basis.levels();
    let rows: Vec<Vec<f64>> = (0..n as u32)
        .into_par_iter()
        .map(|a| {
            let mut row = vec![0.0; n];
            for (k, &s) in basis.states().iter().enumerate() {
                if state[k] == 0.0 {
                    continue;
                }
                for b in 0..n as u32 {
                    if let Some((t, sign)) = basis::hop(s, a, b) {
                        if let Some(idx) = basis.index_of(t) {
                            row[b as usize] += sign * state[idx] * state[k];
                        }
                    }
                }
            }
            row
        })
        .collect();
    let trace = (0..n).map(|i| rows[i][i]).sum();
    Ok(OneBodyMatrix { lo: basis.lo, hi: basis.hi, values: rows.concat(), trace })
}

/// Entries `(M, p)` with `|M - N| <= N/2` and `p <= p_max`.
pub fn fermi_window(n: usize, p_max: usize) -> Vec<(usize, usize)> {
    let half = n / 2;
    (n - half..=n + half)
        .flat_map(|m| (0..=p_max.min(m)).map(move |p| (m, p)))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryDeviation {
    #[serde(rename = "M")]
    pub m: usize,
    pub p: usize,
    pub ed: f64,
    pub luttinger: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    pub max_abs: f64,
    pub rms: f64,
    /// Largest deviation over diagonal entries only.
    pub max_abs_diagonal: f64,
    pub entries: Vec<EntryDeviation>,
}

/// Deviation between ED and the Luttinger occupation matrix over `window`;
/// entries missing from either side are skipped.
pub fn compare_to_luttinger(ed: &OneBodyMatrix, occ: &OccupationMatrix, window: &[(usize, usize)]) -> ComparisonReport {
    let entries: Vec<EntryDeviation> = window
        .iter()
        .filter_map(|&(m, p)| {
            let l = occ.get(m, p)?;
            let e = ed.get((m - p) as i64, (m + p) as i64)?;
            Some(EntryDeviation { m, p, ed: e, luttinger: l })
        })
        .collect();
    let dev = |e: &EntryDeviation| (e.ed - e.luttinger).abs();
    let max_abs = entries.iter().map(dev).fold(0.0, f64::max);
    let max_abs_diagonal = entries.iter().filter(|e| e.p == 0).map(dev).fold(0.0, f64::max);
    let rms = if entries.is_empty() {
        0.0
    } else {
        (entries.iter().map(|e| dev(e).powi(2)).sum::<f64>() / entries.len() as f64).sqrt()
    };
    ComparisonReport { max_abs, rms, max_abs_diagonal, entries }
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleRun {
    pub lo: i64,
    pub hi: i64,
    pub dim: usize,
    pub energy: f64,
    pub residual: f64,
    pub gap: Option<f64>,
    pub method: &'static str,
    pub hermiticity_residual: f64,
    pub dropped_bilinears: usize,
    pub trace: f64,
    pub odd_difference_max: f64,
    pub comparison: ComparisonReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub model_id: String,
    pub m_cut: usize,
    pub window: Vec<(usize, usize)>,
    pub runs: Vec<OracleRun>,
    /// Max deviation strictly decreasing across runs.
    pub monotone: bool,
    /// Ground-state energy non-increasing across runs; only defined when all
    /// runs share the lower level bound, so the particle count is fixed.
    pub variational: Option<bool>,
}

/// Single ED run on `basis` compared against the occupation matrix.
pub fn oracle_run(basis: &FockBasis, model: &InteractionModel, m_cut: usize, occ: &OccupationMatrix, window: &[(usize, usize)]) -> Result<OracleRun> {
    let h = build_hamiltonian(basis, model, m_cut)?;
    let g = ground_state(&h)?;
    let rho = one_body_matrix(&g.vector, basis)?;
    Ok(OracleRun {
        lo: basis.lo,
        hi: basis.hi,
        dim: basis.dim(),
        energy: g.energy,
        residual: g.residual,
        gap: g.gap,
        method: g.method,
        hermiticity_residual: h.hermiticity_residual,
        dropped_bilinears: h.dropped_bilinears,
        trace: rho.trace,
        odd_difference_max: rho.odd_difference_max(),
        comparison: compare_to_luttinger(&rho, occ, window),
    })
}

/// ED at each `(below, hi)` level range (levels `-below..=hi`) against the
/// Luttinger matrix with `M_max = 2N`.
pub fn convergence_study(trap: &TrapConfig, model: &InteractionModel, m_cut: usize, ranges: &[(usize, i64)], p_max: usize) -> Result<ConvergenceReport> {
    let n = trap.n();
    let occ = occupation_matrix(trap, model, 2 * n)?;
    let window = fermi_window(n, p_max);
    let runs = ranges
        .iter()
        .map(|&(below, hi)| oracle_run(&FockBasis::around_fermi(n, below, hi)?, model, m_cut, &occ, &window))
        .collect::<Result<Vec<_>>>()?;
    let monotone = runs.windows(2).all(|w| w[1].comparison.max_abs < w[0].comparison.max_abs);
    let same_lo = runs.windows(2).all(|w| w[0].lo == w[1].lo);
    let variational = same_lo.then(|| runs.windows(2).all(|w| w[1].energy <= w[0].energy + 1e-10));
    Ok(ConvergenceReport { n, model_id: model.model_id(), m_cut, window, runs, monotone, variational })
}

#[cfg(test)]
mod tests;
