use super::*;
use crate::state::DENSITY_TOL;

const H_09: f64 = 0.4689955935892811;
const S_WERNER_095: f64 = 0.36564508215201413;
const S_WERNER_075: f64 = 1.207_518_749_639_422;

fn quick() -> MaxEntOptions {
    MaxEntOptions { restarts: 4, max_evals: 1500, ..Default::default() }
}

#[test]
fn closed_forms() {
    assert_eq!(entropy_rho_p(1.0).unwrap(), 0.0);
    assert!((entropy_rho_p(0.5).unwrap() - 1.0).abs() < 1e-15);
    assert!((entropy_rho_p(0.9).unwrap() - H_09).abs() < 1e-14);
    assert!(entropy_werner(1.0).unwrap().abs() < 1e-15);
    assert!((entropy_werner(0.25).unwrap() - 2.0).abs() < 1e-14);
    assert!((entropy_werner(0.95).unwrap() - S_WERNER_095).abs() < 1e-14);
    assert!(entropy_rho_p(1.1).is_err());
    assert!(entropy_werner(0.2).is_err());
}

#[test]
fn closed_forms_match_spectra() {
    for &p in &[0.1, 0.37, 0.9] {
        let s = von_neumann_entropy(&rho_p(p).unwrap());
        assert!((s - entropy_rho_p(p).unwrap()).abs() < 1e-10);
    }
    for &f in &[0.3, 0.6, 0.95] {
        let s = von_neumann_entropy(&werner(f).unwrap());
        assert!((s - entropy_werner(f).unwrap()).abs() < 1e-10);
    }
}

#[test]
fn equal_concurrence_comparison() {
    let r = compare_equal_concurrence(0.9).unwrap();
    assert!((r.s_rho_p - H_09).abs() < 1e-14);
    assert!((r.s_werner - S_WERNER_095).abs() < 1e-14);
    assert!(r.rho_p_wins);

    let r = compare_equal_concurrence(0.5).unwrap();
    assert!((r.s_rho_p - 1.0).abs() < 1e-14);
    assert!((r.s_werner - S_WERNER_075).abs() < 1e-12);
    assert!(!r.rho_p_wins);

    let r = compare_equal_concurrence(1.0).unwrap();
    assert!(r.s_rho_p.abs() < 1e-15 && r.s_werner.abs() < 1e-15);
    assert!(compare_equal_concurrence(0.0).is_err());
}

#[test]
fn both_families_have_the_stated_concurrence() {
    for &cv in &[0.2, 0.5, 0.9] {
        let a = concurrence(&rho_p(cv).unwrap()).unwrap();
        let b = concurrence(&werner(0.5 * (1.0 + cv)).unwrap()).unwrap();
        assert!((a - cv).abs() < 1e-9 && (b - cv).abs() < 1e-9);
    }
}

#[test]
fn shared_decomposition_matches_public_measures() {
    let rho = crate::random::random_density(Dims::qubits(), 4, 3).unwrap();
    let (s, conc) = entropy_and_concurrence(rho.matrix());
    assert!((s - von_neumann_entropy(&rho)).abs() < 1e-12);
    assert!((conc - concurrence(&rho).unwrap()).abs() < 1e-12);
}

#[test]
fn encode_decode_roundtrip() {
    let m = werner(0.8).unwrap().into_matrix();
    let back = decode(&encode(&m)).unwrap();
    assert!(linalg::max_abs_diff(&m, &back) < 1e-8);
}

#[test]
fn repair_hits_target() {
    for &(start, target) in &[(0.9, 0.6), (0.3, 0.7)] {
        let m = rho_p(start).unwrap().into_matrix();
        let fixed = repair(&m, target);
        let (_, conc) = entropy_and_concurrence(&fixed);
        assert!((conc - target).abs() < 1e-12, "{conc} vs {target}");
    }
}

#[test]
fn degenerate_targets() {
    let r = maxent_search(0.0, &quick()).unwrap();
    assert!((r.best_entropy_bits - 2.0).abs() < 1e-12);
    assert_eq!(r.origin, Origin::Analytic);
    let r = maxent_search(1.0, &quick()).unwrap();
    assert!(r.best_entropy_bits.abs() < 1e-12);
    assert!((r.best_state.purity() - 1.0).abs() < 1e-12);
    assert!(maxent_search(1.5, &quick()).is_err());
}

#[test]
fn search_beats_known_families() {
    for &cv in &[0.3, 0.9] {
        let r = maxent_search(cv, &quick()).unwrap();
        let floor = entropy_rho_p(cv).unwrap().max(entropy_werner(0.5 * (1.0 + cv)).unwrap());
        assert!(r.best_entropy_bits >= floor - 1e-4, "c={cv}: {} < {floor}", r.best_entropy_bits);
        assert!(r.constraint_residual < 1e-5);
        assert!(r.converged);
        let m = r.best_state.matrix();
        assert!(linalg::hermitian_deviation(m) < DENSITY_TOL);
        assert!(r.best_state.eigenvalues().iter().all(|&v| v > -DENSITY_TOL));
    }
}

#[test]
fn search_is_reproducible() {
    let a = maxent_search(0.6, &quick()).unwrap();
    let b = maxent_search(0.6, &quick()).unwrap();
    assert_eq!(a.best_entropy_bits.to_bits(), b.best_entropy_bits.to_bits());
    assert_eq!(a.best_state.matrix(), b.best_state.matrix());
}

#[test]
fn more_restarts_never_hurt() {
    let few = maxent_search(0.9, &MaxEntOptions { restarts: 2, ..quick() }).unwrap();
    let many = maxent_search(0.9, &MaxEntOptions { restarts: 6, ..quick() }).unwrap();
    assert!(many.best_entropy_bits >= few.best_entropy_bits);
}

#[test]
fn sweep_endpoints_and_errors() {
    let pts = maxent_sweep(&[0.0, 1.0, 2.0], &quick());
    assert_eq!(pts.len(), 3);
    assert!((pts[0].outcome.as_ref().unwrap().best_entropy_bits - 2.0).abs() < 1e-12);
    assert!(pts[1].outcome.as_ref().unwrap().best_entropy_bits.abs() < 1e-12);
    assert!(pts[2].outcome.is_err());
}

#[test]
fn sweep_monotone_on_small_grid() {
    let pts = maxent_sweep(&[0.8, 0.9], &quick());
    assert!(monotonicity_violations(&pts, 1e-6).is_empty());
}

#[test]
fn rejects_bad_options() {
    let bad = MaxEntOptions { restarts: 0, ..Default::default() };
    assert!(maxent_search(0.5, &bad).is_err());
    let bad = MaxEntOptions { mu_factor: 1.0, ..Default::default() };
    assert!(maxent_search(0.5, &bad).is_err());
}

#[test]
fn default_schedule() {
    assert_eq!(MaxEntOptions::default().schedule(), vec![10.0, 100.0, 1e3, 1e4, 1e5]);
}
