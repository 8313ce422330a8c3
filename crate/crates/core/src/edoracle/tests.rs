use super::*;
use crate::occupations::{occ_first_order, occ_im1};
use nalgebra::DMatrix;

fn im1(alpha: f64) -> InteractionModel {
    InteractionModel::im1_from_alpha(alpha)
}

/// Jordan–Wigner annihilator for mode `j` of `modes` in the full 2^modes space.
fn jw_annihilator(j: usize, modes: usize) -> DMatrix<f64> {
    let dim = 1 << modes;
    DMatrix::from_fn(dim, dim, |row, col| {
        // <row| c_j |col>: col has bit j set, row = col without it
        if col & (1 << j) == 0 || row != col ^ (1 << j) {
            return 0.0;
        }
        if (col & ((1 << j) - 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 }
    })
}

#[test]
fn two_particles_six_levels_match_jordan_wigner() {
    let modes = 6;
    let v1 = 0.37;
    let c: Vec<DMatrix<f64>> = (0..modes).map(|j| jw_annihilator(j, modes)).collect();
    let cd: Vec<DMatrix<f64>> = c.iter().map(|m| m.transpose()).collect();
    let dim = 1 << modes;
    let rho = |m: i64| {
        let mut r = DMatrix::zeros(dim, dim);
        for p in 0..modes as i64 {
            let q = p + m;
            if (0..modes as i64).contains(&q) {
                r += &cd[q as usize] * &c[p as usize];
            }
        }
        r
    };
    let mut h = DMatrix::zeros(dim, dim);
    for (j, (a, b)) in cd.iter().zip(&c).enumerate() {
        h += (a * b) * (j as f64 + 0.5);
    }
    let (rp, rm) = (rho(1), rho(-1));
    h += ((&rp * &rm + &rm * &rp) + (&rp * &rp + &rm * &rm)) * (0.5 * v1);
    let basis = FockBasis::new(0, 5, 2).unwrap();
    let op = build_hamiltonian(&basis, &InteractionModel::Im1 { v1 }, 1).unwrap();
    assert_eq!(op.dim, 15);
    let dense = op.to_dense();
    for (i, &si) in basis.states().iter().enumerate() {
        for (j, &sj) in basis.states().iter().enumerate() {
            let want = h[(si as usize, sj as usize)];
            assert!((dense[(i, j)] - want).abs() < 1e-14, "({i},{j}): {} vs {want}", dense[(i, j)]);
        }
    }
    assert!(op.hermiticity_residual < 1e-13);
    assert_eq!(op.dropped_bilinears, 2);
}

#[test]
fn free_model_ground_state() {
    let basis = FockBasis::new(0, 9, 4).unwrap();
    let op = build_hamiltonian(&basis, &InteractionModel::Free, 1).unwrap();
    let g = ground_state(&op).unwrap();
    assert!((g.energy - 8.0).abs() < 1e-12);
    assert!((g.vector[0].abs() - 1.0).abs() < 1e-12);
    assert!(g.gap.unwrap() > 0.5);
    let rho = one_body_matrix(&g.vector, &basis).unwrap();
    for i in 0..10 {
        for j in 0..10 {
            let want = if i == j && i < 4 { 1.0 } else { 0.0 };
            assert!((rho.get(i, j).unwrap() - want).abs() < 1e-12);
        }
    }
    let occ = crate::occupations::occupation_matrix(&TrapConfig::li6(4).unwrap(), &InteractionModel::Free, 8).unwrap();
    let r = compare_to_luttinger(&rho, &occ, &fermi_window(4, 2));
    assert!(r.max_abs < 1e-12);
}

#[test]
fn dense_and_lanczos_agree() {
    let basis = FockBasis::new(-2, 7, 5).unwrap();
    assert!(basis.dim() <= 500);
    let op = build_hamiltonian(&basis, &im1(0.6), 1).unwrap();
    let d = ground_state_dense(&op).unwrap();
    let l = ground_state_lanczos(&op, 40, 200).unwrap();
    assert!((d.energy - l.energy).abs() < 1e-10);
    assert!(l.residual <= RESIDUAL_TOLERANCE && d.residual <= RESIDUAL_TOLERANCE);
    let overlap: f64 = d.vector.iter().zip(&l.vector).map(|(a, b)| a * b).sum();
    assert!((overlap.abs() - 1.0).abs() < 1e-10);
    assert!((d.gap.unwrap() - l.gap.unwrap()).abs() < 1e-6);
}

#[test]
fn weak_coupling_matches_full_spectrum() {
    // 2 particles in 4 levels
    let basis = FockBasis::new(0, 3, 2).unwrap();
    let op = build_hamiltonian(&basis, &InteractionModel::Im1 { v1: 0.05 }, 1).unwrap();
    let g = ground_state(&op).unwrap();
    let all = nalgebra::SymmetricEigen::new(op.to_dense()).eigenvalues;
    let min = all.iter().copied().fold(f64::INFINITY, f64::min);
    assert!((g.energy - min).abs() < 1e-13);
    assert!(g.gap.unwrap() > 0.0);
    assert!((g.energy - 2.0).abs() < 0.1);
}

#[test]
fn one_body_trace_and_selection_rule() {
    let basis = FockBasis::around_fermi(4, 2, 7).unwrap();
    let op = build_hamiltonian(&basis, &im1(0.8), 1).unwrap();
    let g = ground_state(&op).unwrap();
    let rho = one_body_matrix(&g.vector, &basis).unwrap();
    assert!((rho.trace - 6.0).abs() < 1e-12);
    assert!(rho.odd_difference_max() < 1e-12);
    assert!(rho.get(3, 5).unwrap().abs() > 1e-3);
    for i in -2..=7 {
        for j in -2..=7 {
            assert!((rho.get(i, j).unwrap() - rho.get(j, i).unwrap()).abs() < 1e-12);
        }
    }
}

#[test]
fn basis_too_small_is_reported() {
    let basis = FockBasis::new(0, 4, 2).unwrap();
    match build_hamiltonian(&basis, &InteractionModel::Free, 2) {
        Err(Error::BasisTooSmall { m_cut: 2, dropped, .. }) => assert_eq!(dropped, 6),
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        build_hamiltonian(&basis, &InteractionModel::Im1 { v1: -2.0 }, 1),
        Err(Error::ModelInvalid { .. })
    ));
}

#[test]
fn weak_coupling_slope_converges_with_range() {
    let n = 4;
    let trap = TrapConfig::li6(n).unwrap();
    let eps = 1e-4;
    let mut errors = Vec::new();
    for (below, hi) in [(2, 7), (3, 9), (4, 11)] {
        let basis = FockBasis::around_fermi(n, below, hi).unwrap();
        let entry = |v1: f64| {
            let op = build_hamiltonian(&basis, &InteractionModel::Im1 { v1 }, 1).unwrap();
            let g = ground_state(&op).unwrap();
            one_body_matrix(&g.vector, &basis).unwrap().get(2, 4).unwrap()
        };
        let fd = (entry(eps) - entry(-eps)) / (2.0 * eps);
        let coef = occ_first_order(&trap, 1.0, 3, 1) - occ_first_order(&trap, 0.0, 3, 1);
        errors.push((fd - coef).abs());
    }
    // first order only couples the reference to one-hop states, so every range is exact
    assert!(errors.iter().all(|&e| e < 1e-6), "{errors:?}");
}

#[test]
fn small_convergence_study() {
    let trap = TrapConfig::li6(4).unwrap();
    let model = im1(0.3);
    let report = convergence_study(&trap, &model, 1, &[(2, 7), (3, 9)], 2).unwrap();
    assert!(report.monotone, "{:?}", report.runs.iter().map(|r| r.comparison.max_abs).collect::<Vec<_>>());
    for r in &report.runs {
        assert!(r.hermiticity_residual < 1e-13);
        assert!(r.odd_difference_max < 1e-12);
        assert!(r.gap.unwrap() > 0.0);
    }
    assert!(report.runs[1].comparison.max_abs < 0.02);
    // ED occupations track the closed form near the edge
    let p = occ_im1(&trap, &model, 3, 0).unwrap();
    let e = report.runs[1].comparison.entries.iter().find(|e| e.m == 3 && e.p == 0).unwrap();
    assert!((e.luttinger - p).abs() < 1e-12);
}

#[test]
fn embedded_ground_state_bounds_larger_basis() {
    let model = im1(0.5);
    let small = FockBasis::around_fermi(4, 2, 6).unwrap();
    let large = FockBasis::around_fermi(4, 2, 9).unwrap();
    let gs = ground_state(&build_hamiltonian(&small, &model, 1).unwrap()).unwrap();
    let hl = build_hamiltonian(&large, &model, 1).unwrap();
    let gl = ground_state(&hl).unwrap();
    let mut psi = vec![0.0; large.dim()];
    for (&s, &a) in small.states().iter().zip(&gs.vector) {
        // same lower bound, so the bit layout matches
        psi[large.index_of(s).unwrap()] = a;
    }
    let mut hpsi = vec![0.0; large.dim()];
    hl.apply(&psi, &mut hpsi);
    let rq: f64 = psi.iter().zip(&hpsi).map(|(a, b)| a * b).sum();
    assert!(rq >= gl.energy - 1e-12);
    // the truncated operator itself changes with the range, so raw energies need not be ordered
    let trap = TrapConfig::li6(4).unwrap();
    let report = convergence_study(&trap, &model, 1, &[(2, 6), (2, 7), (2, 9)], 2).unwrap();
    assert!(report.variational.is_some());
    assert_eq!(convergence_study(&trap, &model, 1, &[(2, 6), (3, 7)], 2).unwrap().variational, None);
}
