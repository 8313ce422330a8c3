use rayon::prelude::*;
use serde::Serialize;

use super::basis::{hop, FockBasis};
use crate::trapmodel::{coupling_at, InteractionModel};
use crate::{Error, Result};

/// Real symmetric operator in CSR form over a [`FockBasis`].
#[derive(Clone, Debug, Serialize)]
pub struct ManyBodyOperator {
    pub dim: usize,
    #[serde(skip)]
    row_ptr: Vec<usize>,
    #[serde(skip)]
    cols: Vec<u32>,
    #[serde(skip)]
    vals: Vec<f64>,
    /// `max |H_ij - H_ji|`.
    pub hermiticity_residual: f64,
    /// Bilinears `c+_{p+-m} c_p` with the target level outside the range.
    pub dropped_bilinears: usize,
}

impl ManyBodyOperator {
    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().map(|&c| c as usize).zip(self.vals[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[r.clone()].binary_search(&(j as u32)) {
            Ok(k) => self.vals[r.start + k],
            Err(_) => 0.0,
        }
    }

    /// `y = H x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.par_iter_mut().enumerate().for_each(|(i, out)| {
            *out = self.row(i).map(|(j, v)| v * x[j]).sum();
        });
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                m[(i, j)] = v;
            }
        }
        m
    }
}

/// `rho(m) |s>` as a list of (state, amplitude), `rho(m) = sum_p c+_{p+m} c_p`.
fn apply_rho(terms: &[(u64, f64)], shift: i64, levels: u32, out: &mut Vec<(u64, f64)>) {
    for &(s, amp) in terms {
        for from in 0..levels {
            let to = from as i64 + shift;
            if to < 0 || to >= levels as i64 {
                continue;
            }
            if let Some((t, sign)) = hop(s, to as u32, from) {
                out.push((t, sign * amp));
            }
        }
    }
}

fn merge(mut terms: Vec<(u64, f64)>) -> Vec<(u64, f64)> {
    terms.sort_by_key(|t| t.0);
    let mut out: Vec<(u64, f64)> = Vec::with_capacity(terms.len());
    for (s, a) in terms {
        match out.last_mut() {
            Some(last) if last.0 == s => last.1 += a,
            _ => out.push((s, a)),
        }
    }
    out
}

/// `H = sum_n (n + 1/2) n_n + 1/2 sum_{m <= m_cut} [V_a (rho(m) rho(-m) + rho(-m) rho(m)) + V_b (rho(m)^2 + rho(-m)^2)]`
/// in units of `hbar omega`, with the bilinears restricted to the level range.
pub fn build_hamiltonian(basis: &FockBasis, model: &InteractionModel, m_cut: usize) -> Result<ManyBodyOperator> {
    if m_cut == 0 {
        return Err(Error::InvalidInput("m_cut must be at least 1".into()));
    }
    let levels = basis.levels() as u32;
    let dropped: usize = (1..=m_cut).map(|m| 2 * m.min(levels as usize)).sum();
    if 3 * m_cut > levels as usize {
        let kept = (1..=m_cut).map(|m| 2 * (levels as usize).saturating_sub(m)).sum();
        return Err(Error::BasisTooSmall { m_cut, dropped, kept });
    }
    let mut couplings = Vec::with_capacity(m_cut);
    for m in 1..=m_cut {
        coupling_at(model, m)?;
        couplings.push(model.potentials(m));
    }
    let rows: Vec<Vec<(u32, f64)>> = basis
        .states()
        .par_iter()
        .map(|&s| {
            let mut diag = 0.0;
            for b in 0..levels {
                if s & (1 << b) != 0 {
                    diag += (basis.lo + b as i64) as f64 + 0.5;
                }
            }
            let mut terms = vec![(s, diag)];
            let start = [(s, 1.0)];
            let mut one = Vec::new();
            let mut two = Vec::new();
            for (k, &(va, vb)) in couplings.iter().enumerate() {
                let m = (k + 1) as i64;
                for (first, second, weight) in [(m, -m, va), (-m, m, va), (m, m, vb), (-m, -m, vb)] {
                    if weight == 0.0 {
                        continue;
                    }
                    one.clear();
                    two.clear();
                    apply_rho(&start, first, levels, &mut one);
                    apply_rho(&one, second, levels, &mut two);
                    terms.extend(two.iter().map(|&(t, a)| (t, 0.5 * weight * a)));
                }
            }
            merge(terms)
                .into_iter()
                .filter(|t| t.1 != 0.0)
                .map(|(t, a)| (basis.index_of(t).expect("number-conserving") as u32, a))
                .collect::<Vec<_>>()
        })
        .map(|mut r| {
            r.sort_by_key(|t| t.0);
            r
        })
        .collect();
    let mut row_ptr = Vec::with_capacity(rows.len() + 1);
    row_ptr.push(0);
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    for r in &rows {
        for &(c, v) in r {
            cols.push(c);
            vals.push(v);
        }
        row_ptr.push(cols.len());
    }
    let mut op = ManyBodyOperator {
        dim: basis.dim(),
        row_ptr,
        cols,
        vals,
        hermiticity_residual: 0.0,
        dropped_bilinears: dropped,
    };
    op.hermiticity_residual = (0..op.dim)
        .into_par_iter()
        .map(|i| op.row(i).map(|(j, v)| (v - op.get(j, i)).abs()).fold(0.0, f64::max))
        .reduce(|| 0.0, f64::max);
    Ok(op)
}
