use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::hamiltonian::ManyBodyOperator;
use crate::{Error, Result};

/// Dense solve up to this dimension, restarted Lanczos above it.
pub const DENSE_LIMIT: usize = 4000;
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, Serialize)]
pub struct GroundState {
    pub energy: f64,
    #[serde(skip)]
    pub vector: Vec<f64>,
    /// `||H x - E x||` for the normalised vector.
    pub residual: f64,
    /// Distance to the next eigenvalue (a Ritz estimate on the Lanczos path).
    pub gap: Option<f64>,
    pub method: &'static str,
}

pub fn ground_state(h: &ManyBodyOperator) -> Result<GroundState> {
    if h.dim <= DENSE_LIMIT {
        ground_state_dense(h)
    } else {
        ground_state_lanczos(h, 80, 200)
    }
}

fn residual(h: &ManyBodyOperator, x: &[f64], e: f64) -> f64 {
    let mut hx = vec![0.0; x.len()];
    h.apply(x, &mut hx);
    hx.iter().zip(x).map(|(a, b)| (a - e * b).powi(2)).sum::<f64>().sqrt()
}

/// Fixes the overall sign so the largest component is positive.
fn normalise_sign(x: &mut [f64]) {
    let big = x.iter().copied().fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
    if big < 0.0 {
        x.iter_mut().for_each(|v| *v = -*v);
    }
}

pub fn ground_state_dense(h: &ManyBodyOperator) -> Result<GroundState> {
    let eig = SymmetricEigen::new(h.to_dense());
    let mut order: Vec<usize> = (0..h.dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let e0 = eig.eigenvalues[order[0]];
    let mut x: Vec<f64> = eig.eigenvectors.column(order[0]).iter().copied().collect();
    normalise_sign(&mut x);
    let res = residual(h, &x, e0);
    Ok(GroundState {
        energy: e0,
        gap: order.get(1).map(|&k| eig.eigenvalues[k] - e0),
        vector: x,
        residual: res,
        method: "dense",
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Restarted Lanczos with full reorthogonalisation and a deterministic start vector.
pub fn ground_state_lanczos(h: &ManyBodyOperator, krylov: usize, max_restarts: usize) -> Result<GroundState> {
    let mut g = lowest(h, krylov, max_restarts, None, RESIDUAL_TOLERANCE)?;
    // second eigenvalue from a run deflated against the ground state
    g.gap = lowest(h, krylov, max_restarts, Some(&g.vector), 1e-8).ok().map(|e| e.energy - g.energy);
    Ok(g)
}

fn project_out(v: &mut [f64], q: Option<&[f64]>) {
    if let Some(q) = q {
        let c = dot(v, q);
        v.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
    }
}

fn lowest(h: &ManyBodyOperator, krylov: usize, max_restarts: usize, deflate: Option<&[f64]>, tol: f64) -> Result<GroundState> {
    let n = h.dim;
    let k_max = krylov.min(n).max(2);
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 / (1.0 + i as f64).sqrt() + 0.01 * (0.7 * i as f64).sin()).collect();
    let mut last = (f64::INFINITY, None);
    for _ in 0..max_restarts {
        project_out(&mut x, deflate);
        let norm = dot(&x, &x).sqrt();
        x.iter_mut().for_each(|v| *v /= norm);
        let mut basis: Vec<Vec<f64>> = vec![x.clone()];
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut w = vec![0.0; n];
        for j in 0..k_max {
            h.apply(&basis[j], &mut w);
            alpha.push(dot(&w, &basis[j]));
            for _ in 0..2 {
                project_out(&mut w, deflate);
                for q in &basis {
                    let c = dot(&w, q);
                    w.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
                }
            }
            let b = dot(&w, &w).sqrt();
            if j + 1 == k_max || b < 1e-13 {
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|v| v / b).collect());
        }
        let k = alpha.len();
        let t = DMatrix::from_fn(k, k, |i, j| {
            if i == j {
                alpha[i]
            } else if i + 1 == j {
                beta[i]
            } else if j + 1 == i {
                beta[j]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(t);
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let theta = eig.eigenvalues[order[0]];
        let y = eig.eigenvectors.column(order[0]);
        let mut next = vec![0.0; n];
        for (q, c) in basis.iter().zip(y.iter()) {
            next.iter_mut().zip(q).for_each(|(a, b)| *a += c * b);
        }
        let norm = dot(&next, &next).sqrt();
        next.iter_mut().for_each(|v| *v /= norm);
        let res = residual(h, &next, theta);
        let gap = order.get(1).map(|&i| eig.eigenvalues[i] - theta);
        x = next;
        if res <= tol {
            normalise_sign(&mut x);
            return Ok(GroundState { energy: theta, vector: x, residual: res, gap, method: "lanczos" });
        }
        last = (res, gap);
    }
    Err(Error::NonConvergence { context: "Lanczos ground state".into(), error: last.0, work: max_restarts * k_max })
}
