//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero only when a
//! criterion fails that is not listed in `RECORDED_DEVIATIONS`.

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use luttinger_trap::constants::{BOHR_MAGNETON, C6_LI_AU};
use luttinger_trap::couplings::{
    dipole_potential, estimate_v1, gaussian_potential, matrix_element_exact, species_enhancement,
    vdw_coefficient_from_c6, vdw_potential, PotentialSpec, Species,
};
use luttinger_trap::edoracle::convergence_study;
use luttinger_trap::observables::{density, duality_check, free_density, friedel_metrics, Grid, Profile};
use luttinger_trap::occupations::{
    first_order_slope, general_entries, occ_im1_detailed, occupation_matrix, particle_hole_check,
    sum_rule, CouplingTable, QuadSettings,
};
use luttinger_trap::specfun::psi_row_into;
use luttinger_trap::trapmodel::{InteractionModel, TrapConfig};

/// Criteria whose failure is expected and explained in the decisions record.
const RECORDED_DEVIATIONS: &[u32] = &[9];

struct Outcome {
    id: u32,
    passed: bool,
    detail: String,
}

fn trap(n: usize) -> TrapConfig {
    TrapConfig::li6(n).unwrap()
}

fn panel() -> Vec<(String, InteractionModel)> {
    let mut models = Vec::new();
    for a0 in [1.0, -1.0] {
        models.push((format!("IM2 alpha0={a0:+}"), InteractionModel::im2_from_alpha0(a0, 0.3, 0.4)));
    }
    for a1 in [0.5, -0.5, 1.0, -1.0] {
        models.push((format!("IM1 alpha1={a1:+}"), InteractionModel::im1_from_alpha(a1)));
    }
    models
}

fn sum_rule_criterion() -> Outcome {
    let t = trap(10);
    let mut passed = true;
    let mut worst: f64 = 0.0;
    let mut slowest: f64 = 0.0;
    for (_, model) in panel() {
        let start = Instant::now();
        let occ = occupation_matrix(&t, &model, 20).unwrap();
        let dev = (sum_rule(&occ).closed_total - 10.0).abs();
        let secs = start.elapsed().as_secs_f64();
        worst = worst.max(dev);
        slowest = slowest.max(secs);
        passed &= dev <= 1e-6 && secs < 10.0;
    }
    Outcome { id: 1, passed, detail: format!("sum rule: max |sum P(M) - 10| = {worst:.2e} (<= 1e-6), slowest model {slowest:.2} s (< 10 s)") }
}

fn particle_hole_criterion() -> Outcome {
    let t = trap(10);
    let worst = panel()
        .iter()
        .map(|(_, m)| particle_hole_check(&occupation_matrix(&t, m, 20).unwrap()).max())
        .fold(0.0, f64::max);
    Outcome { id: 2, passed: worst <= 1e-7, detail: format!("particle-hole identities: max violation {worst:.2e} (<= 1e-7)") }
}

/// `psi_n` from explicit Hermite polynomials, adequate for n < 10.
fn psi_direct(n: usize, x: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * x);
    let h = match n {
        0 => h0,
        _ => {
            for k in 1..n {
                let h2 = 2.0 * x * h1 - 2.0 * k as f64 * h0;
                h0 = h1;
                h1 = h2;
            }
            h1
        }
    };
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    h * (-0.5 * x * x).exp() / (2f64.powi(n as i32) * fact * PI.sqrt()).sqrt()
}

fn trapezoid(p: &Profile) -> f64 {
    let v = &p.values;
    p.grid.step * (v.iter().sum::<f64>() - 0.5 * (v[0] + v[v.len() - 1]))
}

fn free_gas_criterion() -> Outcome {
    let t = trap(10);
    let grid = Grid::new(-12.0, 12.0, 4801).unwrap();
    let occ = occupation_matrix(&t, &InteractionModel::Im2 { gamma0: 0.0, sign: 1, r_gamma: 0.3, r_alpha: 0.4 }, 20).unwrap();
    let prof = density(&t, &occ, &grid).unwrap();
    let pointwise = (0..grid.points)
        .map(|k| {
            let x = grid.coord(k);
            let want: f64 = (0..10).map(|n| psi_direct(n, x).powi(2)).sum();
            (prof.values[k] - want).abs()
        })
        .fold(0.0, f64::max);
    let integral = (trapezoid(&prof) - 10.0).abs();
    Outcome {
        id: 3,
        passed: pointwise <= 1e-10 && integral <= 1e-8,
        detail: format!("free gas: pointwise {pointwise:.2e} (<= 1e-10), |integral - 10| = {integral:.2e} (<= 1e-8)"),
    }
}

fn outside_weight(p: &Profile, edge: f64) -> f64 {
    (0..p.grid.points).filter(|&k| p.grid.coord(k).abs() > edge).map(|k| p.values[k]).sum::<f64>() * p.grid.step
}

fn figure_criterion() -> Outcome {
    let start = Instant::now();
    let t = trap(10);
    let grid = Grid::default_for(&t);
    let free = free_density(&t, &grid);
    let rep = density(&t, &occupation_matrix(&t, &InteractionModel::im2_from_alpha0(1.0, 0.3, 0.4), 20).unwrap(), &grid).unwrap();
    let att = density(&t, &occupation_matrix(&t, &InteractionModel::im2_from_alpha0(-1.0, 0.3, 0.4), 20).unwrap(), &grid).unwrap();
    let rr = friedel_metrics(&rep, &t).unwrap().ratio_to_free;
    let ra = friedel_metrics(&att, &t).unwrap().ratio_to_free;
    let edge = 19f64.sqrt();
    let (wf, wr, wa) = (outside_weight(&free, edge), outside_weight(&rep, edge), outside_weight(&att, edge));
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        id: 4,
        passed: rr > 1.5 && ra < 0.3 && wr > wf && wa > wf && secs < 60.0,
        detail: format!(
            "density figure: ratio_to_free repulsive {rr:.3} (> 1.5), attractive {ra:.3} (< 0.3), weight beyond sqrt(19) free/rep/att {wf:.4}/{wr:.4}/{wa:.4}, {secs:.2} s (< 60 s)"
        ),
    }
}

fn duality_criterion() -> Outcome {
    let t = trap(10);
    let grid = Grid::default_for(&t);
    let worst = [0.1, 0.5, 1.0]
        .iter()
        .map(|&a| duality_check(&t, a, &grid, 20).unwrap().max_deviation)
        .fold(0.0, f64::max);
    Outcome { id: 5, passed: worst <= 1e-6, detail: format!("IM1 duality: max grid deviation {worst:.2e} (<= 1e-6)") }
}

fn oracle_equivalence_criterion() -> Outcome {
    let t = trap(10);
    let settings = QuadSettings::default();
    let mut worst: f64 = 0.0;
    let mut tails = true;
    for (_, model) in panel() {
        let closed = occupation_matrix(&t, &model, 20).unwrap();
        let table = CouplingTable::from_model(&model, None).unwrap();
        let idx: Vec<(usize, usize)> = closed.entries().map(|(m, p, _)| (m, p)).collect();
        let series = general_entries(&t, &table, &idx, &settings).unwrap();
        for ((m, p), s) in idx.iter().zip(&series) {
            worst = worst.max((closed.get(*m, *p).unwrap() - s.value).abs());
            tails &= s.tail_ok;
        }
    }
    Outcome {
        id: 6,
        passed: worst <= 1e-6 && tails,
        detail: format!("closed forms vs W-series: max deviation {worst:.2e} (<= 1e-6) over M <= 20, tails bounded: {tails}"),
    }
}

fn slope_criterion() -> Outcome {
    let t = trap(10);
    let settings = QuadSettings { tol: 1e-13, ..QuadSettings::default() };
    let eps = 1e-5;
    let mut worst: f64 = 0.0;
    for m in 1..=19 {
        let at = |a: f64| occ_im1_detailed(&t, &InteractionModel::im1_from_alpha(a), m, 1, &settings).unwrap().value;
        let fd = (at(eps) - at(-eps)) / (2.0 * eps);
        let coef = first_order_slope(&t, m, 1);
        // zero coefficients are compared on the scale of the edge slope 1/2
        worst = worst.max((fd - coef).abs() / coef.abs().max(0.5));
    }
    Outcome { id: 7, passed: worst <= 1e-4, detail: format!("first-order slope, N=10, p=1, M <= 19: max relative error {worst:.2e} (<= 1e-4)") }
}

fn ed_criterion() -> Outcome {
    let start = Instant::now();
    let t = trap(6);
    let model = InteractionModel::im1_from_alpha(0.3);
    let r = convergence_study(&t, &model, 1, &[(4, 11), (5, 12)], 2).unwrap();
    let devs: Vec<f64> = r.runs.iter().map(|x| x.comparison.max_abs).collect();
    let shown: Vec<String> = devs.iter().map(|d| format!("{d:.2e}")).collect();
    let levels: Vec<i64> = r.runs.iter().map(|x| x.hi - x.lo + 1).collect();
    let secs = start.elapsed().as_secs_f64();
    let last = *devs.last().unwrap();
    Outcome {
        id: 8,
        passed: r.monotone && last < 0.02 && levels[0] >= 16 && secs < 300.0,
        detail: format!("ED N=6 IM1 alpha1=0.3: levels {levels:?}, max deviation {shown:?}, monotone {} (final < 0.02), {secs:.1} s (< 300 s)", r.monotone),
    }
}

fn prefactor_criterion() -> Outcome {
    let at = |n: usize| {
        let t = trap(n);
        let lam = 1.0 / n as f64;
        let d = estimate_v1(&dipole_potential(BOHR_MAGNETON, &t, lam).unwrap(), n, n).unwrap().bracket;
        let v = estimate_v1(&vdw_potential(vdw_coefficient_from_c6(C6_LI_AU), &t, lam).unwrap(), n, n).unwrap().bracket;
        (d, v)
    };
    let (d1, v1) = at(10_000);
    let (d2, v2) = at(40_000);
    let within3 = |x: f64, target: f64| x / target > 1.0 / 3.0 && x / target < 3.0;
    let dipole_ok = within3(d1, -3e-3) && (d2 / d1 / 4.0 - 1.0).abs() < 1e-10;
    let vdw_ok = within3(v1, -6e-7) && (v2 / v1 / 32.0 - 1.0).abs() < 1e-10;
    let li = Species::li6();
    let cr = species_enhancement(&li, &Species::cr53());
    let polar = species_enhancement(&li, &Species::polar_molecule(li.mass));
    let cr_ok = (cr / 9.4e2 - 1.0).abs() < 0.2;
    let polar_ok = (polar / 1e5 - 1.0).abs() < 0.2;
    Outcome {
        id: 9,
        passed: dipole_ok && vdw_ok && cr_ok && polar_ok,
        detail: format!(
            "coupling prefactors: dipole {d1:.3e} (ok: {dipole_ok}), vdW {v1:.3e} (ok: {vdw_ok}), Cr/Li {cr:.1} (ok: {cr_ok}), polar {polar:.3e} vs 1e5 (ok: {polar_ok})"
        ),
    }
}

/// Real-space double integral on a uniform grid with a Gaussian kernel.
fn real_space_element(psi: &[Vec<f64>], kernel: &[Vec<f64>], h: f64, idx: [usize; 4]) -> f64 {
    let [m, p, q, n] = idx;
    let mut total = 0.0;
    for (i, ri) in psi.iter().enumerate() {
        let a = ri[m] * ri[q];
        if a == 0.0 {
            continue;
        }
        let inner: f64 = psi.iter().zip(&kernel[i]).map(|(rj, k)| rj[p] * rj[n] * k).sum();
        total += a * inner;
    }
    total * h * h
}

fn simpson_transform(pot: &PotentialSpec, k: f64) -> f64 {
    let z_max = 200.0 * pot.d;
    let n = 400_000;
    let h = z_max / n as f64;
    let f = |z: f64| pot.real_space(z).unwrap() * (k * z).cos();
    let mut s = f(0.0) + f(z_max);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    2.0 * s * h / 3.0
}

fn matrix_element_criterion() -> Outcome {
    let t = trap(10);
    let (g, w) = (1.3, 0.7);
    let pot = gaussian_potential(g * t.hbar_omega(), w, &t).unwrap();
    let h = 0.04;
    let pts: Vec<f64> = (0..=600).map(|i| -12.0 + h * i as f64).collect();
    let psi: Vec<Vec<f64>> = pts
        .iter()
        .map(|&x| {
            let mut r = vec![0.0; 7];
            psi_row_into(x, &mut r);
            r
        })
        .collect();
    let kernel: Vec<Vec<f64>> = pts.iter().map(|&x| pts.iter().map(|&y| g * (-(x - y).powi(2) / (2.0 * w * w)).exp()).collect()).collect();
    let mut worst: f64 = 0.0;
    let mut forbidden_ok = true;
    let mut count = 0;
    for m in 0..=6 {
        for q in m..=6 {
            for p in 0..=6 {
                for n in p..=6 {
                    let e = matrix_element_exact(&pot, m, p, q, n).unwrap().value;
                    if (q + p) % 2 != (n + m) % 2 {
                        forbidden_ok &= e == 0.0;
                        continue;
                    }
                    let want = real_space_element(&psi, &kernel, h, [m, p, q, n]);
                    count += 1;
                    worst = worst.max(((e - want) / want).abs());
                }
            }
        }
    }
    let vdw = vdw_potential(vdw_coefficient_from_c6(C6_LI_AU), &t, 0.01).unwrap();
    let ft = [0.5, 1.0, 2.0]
        .iter()
        .map(|&kd| {
            let k = kd / vdw.d;
            (simpson_transform(&vdw, k) / vdw.fourier(k) - 1.0).abs()
        })
        .fold(0.0, f64::max);
    Outcome {
        id: 10,
        passed: worst <= 1e-6 && forbidden_ok && ft <= 1e-8,
        detail: format!(
            "matrix elements: {count} allowed elements vs 2D quadrature max rel {worst:.2e} (<= 1e-6), parity-forbidden exactly zero: {forbidden_ok}, vdW transform max rel {ft:.2e} (<= 1e-8)"
        ),
    }
}

fn determinism_criterion() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("fig1.json");
    std::fs::write(
        &cfg,
        r#"{"trap": {"N": 10}, "m_max": 20,
            "figure": {"repulsive": {"kind": "IM2", "alpha0": 1.0, "r_gamma": 0.3, "r_alpha": 0.4},
                       "attractive": {"kind": "IM2", "alpha0": -1.0, "r_gamma": 0.3, "r_alpha": 0.4}},
            "model": {"kind": "IM2", "alpha0": 1.0, "r_gamma": 0.3, "r_alpha": 0.4}}"#,
    )
    .unwrap();
    let out = dir.path().join("out.csv");
    let mut identical = true;
    let mut checked = Vec::new();
    for task in ["density", "momentum", "occupations", "couplings"] {
        let mut runs = Vec::new();
        for _ in 0..2 {
            let status = Command::new(env!("CARGO_BIN_EXE_luttrap"))
                .args([task, "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()])
                .output()
                .unwrap();
            identical &= status.status.success();
            runs.push(std::fs::read(&out).unwrap_or_default());
        }
        identical &= !runs[0].is_empty() && runs[0] == runs[1];
        checked.push(task);
    }
    Outcome { id: 11, passed: identical, detail: format!("determinism: byte-identical CSV across repeated runs for {checked:?}: {identical}") }
}

fn main() {
    let criteria: [fn() -> Outcome; 11] = [
        sum_rule_criterion,
        particle_hole_criterion,
        free_gas_criterion,
        figure_criterion,
        duality_criterion,
        oracle_equivalence_criterion,
        slope_criterion,
        ed_criterion,
        prefactor_criterion,
        matrix_element_criterion,
        determinism_criterion,
    ];
    let mut unexpected = Vec::new();
    for c in criteria {
        let o = c();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        let note = if !o.passed && RECORDED_DEVIATIONS.contains(&o.id) { " [recorded deviation]" } else { "" };
        println!("[{tag}] {:>2} {}{note}", o.id, o.detail);
        if !o.passed && note.is_empty() {
            unexpected.push(o.id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
