//! Model-agnostic path: the truncated W-series evaluated on a 2D grid.

use rayon::prelude::*;
use serde::Serialize;

use crate::specfun::dirichlet_kernel;
use crate::trapmodel::{coupling_at, InteractionModel, TrapConfig};
use crate::{Error, Result};

use super::closed::grid_entries;
use super::grid::{centered, cos_table, initial_nodes, PeriodicGrid};
use super::QuadSettings;

/// Tail tolerance below which a truncated series is accepted without a flag.
pub const TAIL_TOLERANCE: f64 = 1e-10;

/// Tabulated `gamma_m`, `alpha_m` for m = 1..=m_cut.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CouplingTable {
    pub gamma: Vec<f64>,
    pub alpha: Vec<f64>,
    /// Bound on `|W_exact - W_truncated|` from the omitted modes.
    pub tail_bound: f64,
}

impl CouplingTable {
    /// Table with no tail beyond the given entries.
    pub fn new(gamma: Vec<f64>, alpha: Vec<f64>) -> Result<Self> {
        if gamma.len() != alpha.len() {
            return Err(Error::InvalidInput("gamma and alpha tables differ in length".into()));
        }
        Ok(CouplingTable { gamma, alpha, tail_bound: 0.0 })
    }

    /// Tabulates a model. Without `m_cut`, the cut is the smallest m with
    /// `gamma_m + |alpha_m| < 1e-12`, capped at 10^4.
    pub fn from_model(model: &InteractionModel, m_cut: Option<usize>) -> Result<Self> {
        const CAP: usize = 10_000;
        let weight = |m: usize| -> Result<(f64, f64)> {
            let c = coupling_at(model, m)?;
            Ok((c.gamma_m, c.alpha_m))
        };
        let cut = match (m_cut, model.support()) {
            (Some(c), _) => c,
            (None, Some(s)) => s,
            (None, None) => {
                let mut m = 1;
                while m < CAP {
                    let (g, a) = weight(m)?;
                    if g + a.abs() < 1e-12 {
                        break;
                    }
                    m += 1;
                }
                m
            }
        };
        let mut gamma = Vec::with_capacity(cut);
        let mut alpha = Vec::with_capacity(cut);
        for m in 1..=cut {
            let (g, a) = weight(m)?;
            gamma.push(g);
            alpha.push(a);
        }
        let limit = model.support().unwrap_or(usize::MAX);
        let mut tail_bound = 0.0;
        let mut m = cut + 1;
        while m <= limit && m <= 100 * CAP {
            let (g, a) = weight(m)?;
            let term = 4.0 * (g + a.abs()) / m as f64;
            tail_bound += term;
            if term < 1e-20 && model.support().is_none() {
                break;
            }
            m += 1;
        }
        Ok(CouplingTable { gamma, alpha, tail_bound })
    }

    pub fn m_cut(&self) -> usize {
        self.gamma.len()
    }
}

/// `W(u, v) = 2 sum_m (1/m) [gamma_m - alpha_m cos m(u+v)] [1 - cos m(u-v)]`.
#[derive(Clone, Debug)]
pub struct WFunction<'a> {
    pub table: &'a CouplingTable,
}

impl WFunction<'_> {
    pub fn eval(&self, u: f64, v: f64) -> f64 {
        let (sum, diff) = (u + v, u - v);
        self.table
            .gamma
            .iter()
            .zip(&self.table.alpha)
            .enumerate()
            .map(|(k, (g, a))| {
                let m = (k + 1) as f64;
                2.0 / m * (g - a * (m * sum).cos()) * (1.0 - (m * diff).cos())
            })
            .sum()
    }

    pub fn truncation_bound(&self) -> f64 {
        self.table.tail_bound
    }
}

/// `e^{-W}` on the shared grid, with s = u - v along rows and t = u + v along columns.
pub(crate) fn w_grid(table: &CouplingTable, n: usize) -> PeriodicGrid {
    let cos = cos_table(n);
    let mut values = vec![0.0; n * n];
    values.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        let weights: Vec<f64> = (1..=table.m_cut())
            .map(|m| 2.0 / m as f64 * (1.0 - cos[(m * i) % n]))
            .collect();
        let base: f64 = weights.iter().zip(&table.gamma).map(|(w, g)| w * g).sum();
        let coef: Vec<f64> = weights.iter().zip(&table.alpha).map(|(w, a)| w * a).collect();
        for (j, out) in row.iter_mut().enumerate() {
            let mut osc = 0.0;
            for (k, c) in coef.iter().enumerate() {
                osc += c * cos[((k + 1) * j) % n];
            }
            *out = (osc - base).exp();
        }
    });
    PeriodicGrid { n, values }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GeneralResult {
    pub value: f64,
    pub error: f64,
    pub nodes: usize,
    pub m_cut: usize,
    pub tail_bound: f64,
    /// False when the omitted coupling tail exceeds [`TAIL_TOLERANCE`].
    pub tail_ok: bool,
}

/// Batch evaluation of `<c+_{M-p} c_{M+p}>` through the W-series.
pub fn general_entries(trap: &TrapConfig, table: &CouplingTable, indices: &[(usize, usize)], settings: &QuadSettings) -> Result<Vec<GeneralResult>> {
    if let Some(&(m, p)) = indices.iter().find(|&&(m, p)| p > m) {
        return Err(Error::InvalidInput(format!("need M - p >= 0, got M={m}, p={p}")));
    }
    let (raw, _) = grid_entries(trap.n(), indices, 128, settings, |n| w_grid(table, n), "W-series double integral")?;
    Ok(raw
        .into_iter()
        .map(|r| GeneralResult {
            value: r.value,
            error: r.error,
            nodes: r.nodes,
            m_cut: table.m_cut(),
            tail_bound: table.tail_bound,
            tail_ok: table.tail_bound < TAIL_TOLERANCE,
        })
        .collect())
}

/// Generic W-series oracle for `<c+_{M-p} c_{M+p}>`.
pub fn occ_general(trap: &TrapConfig, table: &CouplingTable, m: usize, p: usize) -> Result<GeneralResult> {
    Ok(general_entries(trap, table, &[(m, p)], &QuadSettings::default())?[0])
}

/// `<c+_m c_n>` for arbitrary levels. Odd differences go through the full
/// `[0, 4pi)` range of u + v, where the half-integer frequency cancels.
pub fn occ_general_pair(trap: &TrapConfig, table: &CouplingTable, m: usize, n: usize) -> Result<GeneralResult> {
    let (lo, hi) = (m.min(n), m.max(n));
    let d = hi - lo;
    if d % 2 == 0 {
        return occ_general(trap, table, (lo + hi) / 2, d / 2);
    }
    let a = 0.5 * (lo + hi) as f64 + 0.5 - trap.n() as f64;
    let nodes = initial_nodes(a, d, 128);
    let grid = w_grid(table, nodes);
    let mut total = 0.0;
    for i in 0..nodes {
        let ds = dirichlet_kernel(a, centered(nodes, i));
        let row = &grid.values[i * nodes..(i + 1) * nodes];
        let mut inner = 0.0;
        for j in 0..2 * nodes {
            let sigma = 4.0 * std::f64::consts::PI * j as f64 / (2 * nodes) as f64;
            inner += (0.5 * d as f64 * sigma).cos() * row[j % nodes];
        }
        total += ds * inner / (2 * nodes) as f64;
    }
    Ok(GeneralResult {
        value: -total / nodes as f64,
        error: 0.0,
        nodes: 2 * nodes * nodes,
        m_cut: table.m_cut(),
        tail_bound: table.tail_bound,
        tail_ok: table.tail_bound < TAIL_TOLERANCE,
    })
}

