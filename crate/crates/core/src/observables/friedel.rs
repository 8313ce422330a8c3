use serde::Serialize;

use super::{free_density, friedel_period, Profile};
use crate::trapmodel::TrapConfig;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FriedelMetrics {
    /// Peak-to-trough of the residual against a one-period moving average,
    /// over `|v| < sqrt(2N-1)/2`.
    pub amplitude: f64,
    pub free_amplitude: f64,
    pub ratio_to_free: f64,
    /// Twice the mean spacing of residual zero crossings; `None` with fewer than three crossings.
    pub period_estimate: Option<f64>,
    /// `pi / sqrt(2N-1)`.
    pub expected_period: f64,
}

struct Residual {
    amplitude: f64,
    crossings: Vec<f64>,
}

fn residual(profile: &Profile, trap: &TrapConfig) -> Result<Residual> {
    let period = friedel_period(trap);
    let g = &profile.grid;
    if g.step > 0.25 * period {
        return Err(Error::InvalidInput(format!(
            "grid spacing {} cannot resolve the Friedel period {period}",
            g.step
        )));
    }
    let half = 0.5 * trap.fermi_width();
    if g.start > -half - period || g.end() < half + period {
        return Err(Error::InvalidInput("grid does not cover the central half of the Fermi width".into()));
    }
    let mut cumulative = vec![0.0; g.points];
    for k in 1..g.points {
        cumulative[k] = cumulative[k - 1] + 0.5 * g.step * (profile.values[k - 1] + profile.values[k]);
    }
    let at = |x: f64| {
        let t = (x - g.start) / g.step;
        let k = (t.floor() as usize).min(g.points - 2);
        let f = t - k as f64;
        cumulative[k] * (1.0 - f) + cumulative[k + 1] * f
    };
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut crossings = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..g.points {
        let v = g.coord(k);
        if v.abs() >= half {
            continue;
        }
        let r = profile.values[k] - (at(v + 0.5 * period) - at(v - 0.5 * period)) / period;
        lo = lo.min(r);
        hi = hi.max(r);
        if let Some((pv, pr)) = prev {
            if (pr < 0.0) != (r < 0.0) {
                crossings.push(pv + (v - pv) * pr / (pr - r));
            }
        }
        prev = Some((v, r));
    }
    Ok(Residual { amplitude: hi - lo, crossings })
}

/// Friedel metrics with the free-gas amplitude computed on the same grid.
pub fn friedel_metrics(profile: &Profile, trap: &TrapConfig) -> Result<FriedelMetrics> {
    let free = free_density(trap, &profile.grid);
    friedel_metrics_against(profile, trap, &free)
}

/// Friedel metrics relative to a supplied free-gas profile.
pub fn friedel_metrics_against(profile: &Profile, trap: &TrapConfig, free: &Profile) -> Result<FriedelMetrics> {
    let r = residual(profile, trap)?;
    let f = residual(free, trap)?;
    let period_estimate = (r.crossings.len() >= 3).then(|| {
        let span = r.crossings[r.crossings.len() - 1] - r.crossings[0];
        2.0 * span / (r.crossings.len() - 1) as f64
    });
    Ok(FriedelMetrics {
        amplitude: r.amplitude,
        free_amplitude: f.amplitude,
        ratio_to_free: r.amplitude / f.amplitude,
        period_estimate,
        expected_period: friedel_period(trap),
    })
}
