//! One-body expectation values `<c+_{M-p} c_{M+p}>` in the oscillator basis.

mod closed;
mod general;
mod grid;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::specfun::{bessel_i, dirichlet_fourier, dirichlet_kernel};
use crate::trapmodel::{InteractionModel, TrapConfig};
use crate::{Error, Result};

pub use closed::{first_order_slope, occ_first_order, occ_im1, occ_im1_detailed, occ_im2, occ_im2_detailed};
pub use general::{general_entries, occ_general, occ_general_pair, CouplingTable, GeneralResult, WFunction, TAIL_TOLERANCE};

/// `a = M + 1/2 - N`, the frequency of the Dirichlet kernel for index `M`.
pub(crate) fn half_index(m: usize, n: usize) -> f64 {
    m as f64 + 0.5 - n as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadSettings {
    /// Target absolute error per entry.
    pub tol: f64,
    /// Node cap for one-dimensional integrals.
    pub max_nodes: usize,
    /// Cap on the side length of the shared 2D grid.
    pub max_grid: usize,
}

impl Default for QuadSettings {
    fn default() -> Self {
        QuadSettings { tol: 1e-10, max_nodes: 1 << 20, max_grid: 4096 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureMeta {
    pub method: String,
    /// Largest node count used by any entry (grid points for 2D rules).
    pub nodes: usize,
    pub max_error: f64,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_cut: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_bound: Option<f64>,
}

/// Banded table of `<c+_{M-p} c_{M+p}>` for `0 <= p <= M`, `M + p <= M_max`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct OccupationMatrix {
    pub n: usize,
    pub m_max: usize,
    pub model_id: String,
    rows: Vec<Vec<f64>>,
    pub quadrature_meta: QuadratureMeta,
}

impl OccupationMatrix {
    /// Entry `(M, p)` if stored.
    pub fn get(&self, m: usize, p: usize) -> Option<f64> {
        self.rows.get(m).and_then(|r| r.get(p)).copied()
    }

    /// Occupation probability `P(M)`.
    pub fn diag(&self, m: usize) -> Option<f64> {
        self.get(m, 0)
    }

    /// `<c+_i c_j>` for arbitrary levels; zero for odd differences and
    /// outside the stored band.
    pub fn element(&self, i: usize, j: usize) -> f64 {
        if (i + j) % 2 == 1 {
            return 0.0;
        }
        self.get((i + j) / 2, i.abs_diff(j) / 2).unwrap_or(0.0)
    }

    /// All stored `(M, p, value)` triples in row order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.rows.iter().enumerate().flat_map(|(m, r)| r.iter().enumerate().map(move |(p, v)| (m, p, *v)))
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixRepr {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "M_max")]
    m_max: usize,
    model_id: String,
    entries: Vec<(usize, usize, f64)>,
    quadrature_meta: QuadratureMeta,
}

impl From<OccupationMatrix> for MatrixRepr {
    fn from(o: OccupationMatrix) -> Self {
        MatrixRepr {
            n: o.n,
            m_max: o.m_max,
            entries: o.entries().collect(),
            model_id: o.model_id,
            quadrature_meta: o.quadrature_meta,
        }
    }
}

impl TryFrom<MatrixRepr> for OccupationMatrix {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        let mut rows: Vec<Vec<Option<f64>>> = band_indices(r.m_max).fold(Vec::new(), |mut acc, (m, _)| {
            if acc.len() <= m {
                acc.push(Vec::new());
            }
            acc[m].push(None);
            acc
        });
        for (m, p, v) in r.entries {
            let slot = rows
                .get_mut(m)
                .and_then(|row| row.get_mut(p))
                .ok_or_else(|| Error::InvalidInput(format!("entry ({m},{p}) outside the band M + p <= {}", r.m_max)))?;
            *slot = Some(v);
        }
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(m, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(p, v)| v.ok_or_else(|| Error::InvalidInput(format!("missing entry ({m},{p})"))))
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(OccupationMatrix { n: r.n, m_max: r.m_max, model_id: r.model_id, rows, quadrature_meta: r.quadrature_meta })
    }
}

fn band_indices(m_max: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=m_max).flat_map(move |m| (0..=m.min(m_max - m)).map(move |p| (m, p)))
}

/// Fills every `(M, p)` with `M + p <= M_max` using the fastest exact route
/// for the model: closed IM1 form, shared-grid IM2 form, or the W-series.
pub fn occupation_matrix(trap: &TrapConfig, model: &InteractionModel, m_max: usize) -> Result<OccupationMatrix> {
    occupation_matrix_with(trap, model, m_max, &QuadSettings::default())
}

pub fn occupation_matrix_with(trap: &TrapConfig, model: &InteractionModel, m_max: usize, settings: &QuadSettings) -> Result<OccupationMatrix> {
    let n = trap.n();
    if m_max + 1 < n {
        return Err(Error::InvalidInput(format!("M_max must be at least N-1 = {}, got {m_max}", n - 1)));
    }
    let indices: Vec<(usize, usize)> = band_indices(m_max).collect();
    let (values, meta): (Vec<f64>, QuadratureMeta) = match (model, model.support()) {
        (InteractionModel::Free, _) => {
            let v = indices.iter().map(|&(m, p)| if p == 0 && m < n { 1.0 } else { 0.0 }).collect();
            (v, QuadratureMeta { method: "exact".into(), nodes: 0, max_error: 0.0, tolerance: settings.tol, m_cut: None, tail_bound: None })
        }
        (_, Some(1)) => {
            let (gamma, alpha) = closed::single_mode(model)?;
            let res = indices
                .par_iter()
                .map(|&(m, p)| closed::im1_integral(n, gamma, alpha, m, p, settings))
                .collect::<Result<Vec<_>>>()?;
            let meta = QuadratureMeta {
                method: "im1-periodic-trapezoid".into(),
                nodes: res.iter().map(|r| r.nodes).max().unwrap_or(0),
                max_error: res.iter().map(|r| r.error).fold(0.0, f64::max),
                tolerance: settings.tol,
                m_cut: Some(1),
                tail_bound: None,
            };
            (res.into_iter().map(|r| r.value).collect(), meta)
        }
        (InteractionModel::Im2 { .. }, _) => {
            let (g0, a0, zg, za) = closed::im2_params(model)?;
            let (res, side) = closed::grid_entries(n, &indices, 128, settings, |k| closed::im2_grid(g0, a0, zg, za, k), "IM2 double integral")?;
            let meta = QuadratureMeta {
                method: "im2-shared-grid-trapezoid".into(),
                nodes: side * side,
                max_error: res.iter().map(|r| r.error).fold(0.0, f64::max),
                tolerance: settings.tol,
                m_cut: None,
                tail_bound: None,
            };
            (res.into_iter().map(|r| r.value).collect(), meta)
        }
        _ => {
            let table = CouplingTable::from_model(model, None)?;
            let res = general_entries(trap, &table, &indices, settings)?;
            let meta = QuadratureMeta {
                method: "w-series-grid-trapezoid".into(),
                nodes: res.first().map(|r| r.nodes).unwrap_or(0),
                max_error: res.iter().map(|r| r.error).fold(0.0, f64::max),
                tolerance: settings.tol,
                m_cut: Some(table.m_cut()),
                tail_bound: Some(table.tail_bound),
            };
            (res.into_iter().map(|r| r.value).collect(), meta)
        }
    };
    let mut rows: Vec<Vec<f64>> = vec![Vec::new(); m_max + 1];
    for (&(m, _), v) in indices.iter().zip(values) {
        rows[m].push(v);
    }
    Ok(OccupationMatrix { n, m_max, model_id: model.model_id(), rows, quadrature_meta: meta })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SumRuleReport {
    #[serde(rename = "N")]
    pub n: usize,
    /// `sum_{M=0}^{2N-1} P(M)`, entries above `M_max` taken as `1 - P(2N-1-M)`.
    pub closed_total: f64,
    pub residual: f64,
    /// `sum_{M=0}^{M_max} P(M)` without closure.
    pub direct_total: f64,
    /// `sum_{M=2N}^{M_max} P(M)`: weight pushed above the particle-hole band.
    pub band_excess: f64,
}

/// Sum rule over the particle–hole band, closed by the reflection `P(2N-1-M) = 1 - P(M)`.
pub fn sum_rule(occ: &OccupationMatrix) -> SumRuleReport {
    let n = occ.n;
    let p = |m: usize| occ.diag(m).unwrap_or(0.0);
    let closed_total: f64 = (0..2 * n)
        .map(|m| if m <= occ.m_max { p(m) } else { 1.0 - p(2 * n - 1 - m) })
        .sum();
    let direct_total = (0..=occ.m_max).map(p).sum();
    let band_excess = (2 * n..=occ.m_max).map(p).sum();
    SumRuleReport { n, closed_total, residual: closed_total - n as f64, direct_total, band_excess }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ParticleHoleReport {
    /// `max |P(M) + P(2N-1-M) - 1|`.
    pub diag: f64,
    /// `max |e(M,p) + e(2N-1-M,p)|` for `p > 0`.
    pub offdiag: f64,
    pub pairs: usize,
}

impl ParticleHoleReport {
    pub fn max(&self) -> f64 {
        self.diag.max(self.offdiag)
    }
}

/// Particle–hole reflection checks over every stored entry whose partner is stored too.
pub fn particle_hole_check(occ: &OccupationMatrix) -> ParticleHoleReport {
    let mut report = ParticleHoleReport { diag: 0.0, offdiag: 0.0, pairs: 0 };
    let top = 2 * occ.n - 1;
    for (m, p, v) in occ.entries() {
        if m > top {
            continue;
        }
        let Some(partner) = (top - m >= p).then(|| occ.get(top - m, p)).flatten() else { continue };
        report.pairs += 1;
        if p == 0 {
            report.diag = report.diag.max((v + partner - 1.0).abs());
        } else {
            report.offdiag = report.offdiag.max((v + partner).abs());
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FermiSumCase {
    pub name: String,
    /// `(1/2pi) int sum_M D_{a_M}(s) f(s) ds` by trapezoid.
    pub numeric: f64,
    /// Same quantity from exact Fourier coefficients of `D_a`.
    pub termwise: f64,
    /// `f(0) ((Q+1)/2 - N)`.
    pub delta_limit: f64,
    pub relative_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FermiSumReport {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "Q")]
    pub q: usize,
    pub cases: Vec<FermiSumCase>,
}

/// Checks that `sum_{M=0}^{Q} D_{M+1/2-N}` acts as `2 pi delta(s) ((Q+1)/2 - N)`.
pub fn fermi_sum_identity_check(n: usize, q: usize, nodes: usize) -> Result<FermiSumReport> {
    if q <= 2 * n {
        return Err(Error::InvalidInput(format!("need Q > 2N, got Q={q}, N={n}")));
    }
    if nodes < 2 * q + 2 {
        return Err(Error::InvalidInput(format!("need at least {} nodes to resolve the kernel sum", 2 * q + 2)));
    }
    let e4 = (-4f64).exp();
    // (name, f, Fourier coefficient f_j for j >= 0, f(0))
    let cases: [(&str, &dyn Fn(f64) -> f64, &dyn Fn(usize) -> f64); 3] = [
        ("constant", &|_| 1.0, &|j| if j == 0 { 1.0 } else { 0.0 }),
        ("cos", &|s: f64| s.cos(), &|j| if j == 1 { 0.5 } else { 0.0 }),
        ("exp_cos", &|s: f64| (4.0 * (s.cos() - 1.0)).exp(), &|j| e4 * bessel_i(j, 4.0)),
    ];
    let kernel_sum: Vec<f64> = (0..nodes)
        .map(|k| {
            let s = grid::centered(nodes, k);
            (0..=q).map(|m| dirichlet_kernel(half_index(m, n), s)).sum()
        })
        .collect();
    let weight = |j: i64| -> f64 { (0..=q).map(|m| dirichlet_fourier(half_index(m, n), j)).sum() };
    let target = (q as f64 + 1.0) / 2.0 - n as f64;
    let out = cases
        .iter()
        .map(|(name, f, coef)| {
            let numeric = (0..nodes).map(|k| kernel_sum[k] * f(grid::centered(nodes, k))).sum::<f64>() / nodes as f64;
            let termwise = coef(0) * weight(0) + 2.0 * (1..=(q as i64 + 40)).map(|j| coef(j as usize) * weight(j)).sum::<f64>();
            let delta_limit = f(0.0) * target;
            FermiSumCase {
                name: name.to_string(),
                numeric,
                termwise,
                delta_limit,
                relative_deviation: (numeric - delta_limit).abs() / delta_limit.abs(),
            }
        })
        .collect();
    Ok(FermiSumReport { n, q, cases: out })
}
