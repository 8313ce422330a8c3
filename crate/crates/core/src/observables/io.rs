use std::fmt::Write;

use serde::Serialize;

use super::{Profile, ProfileKind};
use crate::{Error, Result};

/// CSV with `#`-prefixed metadata lines, a header row and one sample per line.
pub fn profile_to_csv(profile: &Profile, metadata: &[(String, String)]) -> String {
    let mut out = String::new();
    for (k, v) in metadata {
        writeln!(out, "# {k}: {v}").unwrap();
    }
    writeln!(out, "# N: {}", profile.n).unwrap();
    writeln!(out, "# model_id: {}", profile.model_id).unwrap();
    writeln!(out, "# integral: {}", profile.integral).unwrap();
    if profile.coarse_grid {
        writeln!(out, "# warning: grid too coarse to resolve 2k_F").unwrap();
    }
    let (x, y) = match profile.kind {
        ProfileKind::Density => ("v", "n"),
        ProfileKind::Momentum => ("kappa", "p"),
    };
    writeln!(out, "{x},{y}").unwrap();
    for (k, v) in profile.values.iter().enumerate() {
        writeln!(out, "{},{}", profile.grid.coord(k), v).unwrap();
    }
    out
}

/// Three density curves on a common grid.
#[derive(Clone, Debug, Serialize)]
pub struct FigureBundle {
    pub v: Vec<f64>,
    pub n_free: Vec<f64>,
    pub n_repulsive: Vec<f64>,
    pub n_attractive: Vec<f64>,
    pub integrals: [f64; 3],
}

impl FigureBundle {
    /// CSV with columns `v, n_free, n_repulsive, n_attractive`.
    pub fn to_csv(&self, metadata: &[(String, String)]) -> String {
        let mut out = String::new();
        for (k, v) in metadata {
            writeln!(out, "# {k}: {v}").unwrap();
        }
        writeln!(out, "# integrals: {},{},{}", self.integrals[0], self.integrals[1], self.integrals[2]).unwrap();
        writeln!(out, "v,n_free,n_repulsive,n_attractive").unwrap();
        for k in 0..self.v.len() {
            writeln!(out, "{},{},{},{}", self.v[k], self.n_free[k], self.n_repulsive[k], self.n_attractive[k]).unwrap();
        }
        out
    }
}

/// Combines free, repulsive and attractive density profiles into one bundle.
pub fn emit_figure_data(free: &Profile, repulsive: &Profile, attractive: &Profile) -> Result<FigureBundle> {
    for p in [repulsive, attractive] {
        if p.grid != free.grid {
            return Err(Error::InvalidInput("figure profiles are on different grids".into()));
        }
    }
    if [free, repulsive, attractive].iter().any(|p| p.kind != ProfileKind::Density) {
        return Err(Error::InvalidInput("figure bundle takes density profiles".into()));
    }
    Ok(FigureBundle {
        v: free.coords(),
        n_free: free.values.clone(),
        n_repulsive: repulsive.values.clone(),
        n_attractive: attractive.values.clone(),
        integrals: [free.integral, repulsive.integral, attractive.integral],
    })
}
