use super::*;
use crate::families::{self, bell, BellState};
use crate::random;
use crate::state::tensor;

// Frozen values, computed independently from the closed forms in Python.
const H_075: f64 = 0.8112781244591328;
const S_WERNER_09: f64 = 0.6274918436613968;
const EOF_WERNER_075: f64 = 0.35457890266527003;
const RELENT_W09_W075: f64 = 0.10453815576167819;

fn w(f: f64) -> DensityMatrix {
    families::werner(f).unwrap()
}

#[test]
fn binary_entropy_values() {
    assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
    assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
    assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
    assert!((binary_entropy(0.75).unwrap() - H_075).abs() < 1e-15);
    assert!(binary_entropy(1.1).is_err());
    assert!(binary_entropy(-0.01).is_err());
    assert!(binary_entropy(f64::NAN).is_err());
}

#[test]
fn von_neumann_values() {
    assert!(von_neumann_entropy(&bell(BellState::PsiPlus).projector()).abs() < 1e-12);
    let mixed = DensityMatrix::maximally_mixed(Dims::qubits());
    assert!((von_neumann_entropy(&mixed) - 2.0).abs() < 1e-12);
    assert!((von_neumann_entropy(&w(0.9)) - S_WERNER_09).abs() < 1e-12);
}

#[test]
fn pure_entanglement_values() {
    assert!((pure_entanglement(&bell(BellState::PsiPlus)) - 1.0).abs() < 1e-12);
    let prod = PureState::basis(0, 1, Dims::qubits()).unwrap();
    assert!(pure_entanglement(&prod).abs() < 1e-12);
    for a in [0.3_f64, 0.6, 0.8, 0.95] {
        let b = (1.0 - a * a).sqrt();
        let s = families::schmidt(a, b).unwrap();
        assert!((pure_entanglement(&s) - binary_entropy(a * a).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn pure_entanglement_symmetric_in_parties() {
    for seed in 0..20 {
        let psi = random::random_pure(Dims::new(2, 3).unwrap(), seed);
        let rho = psi.projector();
        let sa = von_neumann_entropy(&state::partial_trace(&rho, Subsystem::A));
        let sb = von_neumann_entropy(&state::partial_trace(&rho, Subsystem::B));
        assert!((sa - sb).abs() < 1e-10);
        assert!((pure_entanglement(&psi) - sa).abs() < 1e-10);
    }
}

#[test]
fn ensemble_eof_values() {
    let d = Dims::qubits();
    let e = Ensemble::new(vec![(1.0, bell(BellState::PsiPlus))]).unwrap();
    assert!((ensemble_eof(&e) - 1.0).abs() < 1e-12);
    let e = Ensemble::uniform(vec![PureState::basis(0, 0, d).unwrap(), PureState::basis(1, 1, d).unwrap()]).unwrap();
    assert!(ensemble_eof(&e).abs() < 1e-12);
}

#[test]
fn concurrence_values() {
    assert!((concurrence(&bell(BellState::PsiPlus).projector()).unwrap() - 1.0).abs() < 1e-9);
    for f in [0.25_f64, 0.4, 0.5, 0.6, 0.75, 0.9, 1.0] {
        let want = (2.0 * f - 1.0).max(0.0);
        assert!((concurrence(&w(f)).unwrap() - want).abs() < 1e-9, "F={f}");
    }
    for p in [0.0, 0.01, 0.3, 0.9, 1.0] {
        let got = concurrence(&families::rho_p(p).unwrap()).unwrap();
        assert!((got - p).abs() < 1e-7, "p={p}: {got}");
    }
    let big = DensityMatrix::maximally_mixed(Dims::new(3, 3).unwrap());
    assert!(matches!(concurrence(&big), Err(Error::Dimension(_))));
    assert!(matches!(eof_two_qubit(&big), Err(Error::Dimension(_))));
}

#[test]
fn eof_values() {
    assert!((eof_two_qubit(&w(0.75)).unwrap() - EOF_WERNER_075).abs() < 1e-9);
    assert!((eof_werner_closed_form(0.75).unwrap() - EOF_WERNER_075).abs() < 1e-12);
    assert_eq!(eof_werner_closed_form(1.0).unwrap(), 1.0);
    assert_eq!(eof_werner_closed_form(0.5).unwrap(), 0.0);
    assert!(eof_werner_closed_form(0.2).is_err());
    assert!(eof_werner_closed_form(1.01).is_err());
    for a in [0.6_f64, 0.8, 0.9] {
        let b = (1.0 - a * a).sqrt();
        let s = families::schmidt(a, b).unwrap().projector();
        assert!((eof_two_qubit(&s).unwrap() - binary_entropy(a * a).unwrap()).abs() < 1e-7);
    }
}

#[test]
fn separable_mixture_has_zero_eof() {
    let mut rng = random::rng(11);
    for _ in 0..20 {
        let rho = random::random_separable_with(Dims::qubits(), 3, &mut rng);
        assert!(eof_two_qubit(&rho).unwrap() < 1e-7);
    }
}

#[test]
fn coherent_info_values() {
    let bellp = bell(BellState::PsiPlus).projector();
    assert!((coherent_info_bound(&bellp, Subsystem::A) - 1.0).abs() < 1e-12);
    let mixed = DensityMatrix::maximally_mixed(Dims::qubits());
    assert!((coherent_info_bound(&mixed, Subsystem::B) + 1.0).abs() < 1e-12);
    assert!((coherent_info_bound(&w(0.9), Subsystem::A) - (1.0 - S_WERNER_09)).abs() < 1e-12);
}

#[test]
fn ppt_values() {
    let r = ppt_check(&bell(BellState::PsiPlus).projector());
    assert!(!r.is_ppt);
    assert!((r.min_eig + 0.5).abs() < 1e-12);
    let r = ppt_check(&w(0.5));
    assert!(r.is_ppt);
    assert!(r.min_eig.abs() < 1e-12);
    for p in [0.01, 0.1, 0.5, 0.9] {
        let r = ppt_check(&families::rho_p(p).unwrap());
        assert!(!r.is_ppt && r.min_eig < 0.0, "p={p}");
    }
}

#[test]
fn relative_entropy_values() {
    let rho = w(0.9);
    assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-12);
    let bellp = bell(BellState::PsiPlus).projector();
    let mixed = DensityMatrix::maximally_mixed(Dims::qubits());
    assert!((relative_entropy(&bellp, &mixed).unwrap() - 2.0).abs() < 1e-12);
    assert!((relative_entropy(&rho, &w(0.75)).unwrap() - RELENT_W09_W075).abs() < 1e-12);
    // support violation
    let flip = PureState::basis(0, 1, Dims::qubits()).unwrap().projector();
    assert_eq!(relative_entropy(&mixed, &flip).unwrap(), f64::INFINITY);
    assert!(relative_entropy(&mixed, &DensityMatrix::maximally_mixed(Dims::new(3, 3).unwrap())).is_err());
}

#[test]
fn relative_entropy_positive_on_random_pairs() {
    for seed in 0..50 {
        let a = random::random_density(Dims::qubits(), 4, seed).unwrap();
        let b = random::random_density(Dims::qubits(), 4, seed + 1000).unwrap();
        assert!(relative_entropy(&a, &b).unwrap() > 1e-9);
        assert!(relative_entropy(&a, &a).unwrap() < 1e-9);
    }
}

/// Concurrence via the Hermitian chain `R = sqrt(sqrt(ρ) ρ̃ sqrt(ρ))`.
fn concurrence_root_chain(rho: &DensityMatrix) -> f64 {
    let sqrt_rho = linalg::hermitian_fn(rho.matrix(), |x| x.max(0.0).sqrt());
    let inner = linalg::hermitian_part(&(&sqrt_rho * spin_flip(rho).unwrap() * &sqrt_rho));
    let r = linalg::hermitian_fn(&inner, |x| x.max(0.0).sqrt());
    let l = linalg::eigh(&r).0;
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

/// Concurrence from the eigenvalues of the non-Hermitian product `ρ ρ̃`.
fn concurrence_product_route(rho: &DensityMatrix) -> f64 {
    let product = rho.matrix() * spin_flip(rho).unwrap();
    let mut l: Vec<f64> = nalgebra::Schur::new(product)
        .eigenvalues()
        .unwrap()
        .iter()
        .map(|z| z.re.max(0.0).sqrt())
        .collect();
    l.sort_by(|a, b| b.total_cmp(a));
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

#[test]
fn three_routes_agree() {
    for seed in 0..200 {
        let rank = 1 + (seed as usize % 4);
        let rho = random::random_density(Dims::qubits(), rank, seed).unwrap();
        let a = concurrence(&rho).unwrap();
        let b = concurrence_root_chain(&rho);
        let p = concurrence_product_route(&rho);
        assert!((a - b).abs() < 1e-7, "seed {seed}: {a} vs {b}");
        assert!((a - p).abs() < 1e-7, "seed {seed}: {a} vs {p}");
    }
}

#[test]
fn concurrence_local_unitary_invariance() {
    let mut rng = random::rng(5);
    for seed in 0..100 {
        let rho = random::random_density(Dims::qubits(), 2, seed).unwrap();
        let u = random::random_unitary(2, &mut rng).kronecker(&random::random_unitary(2, &mut rng));
        let rotated = DensityMatrix::renormalized(linalg::conjugate_by(&u, rho.matrix()), Dims::qubits()).unwrap();
        let (a, b) = (concurrence(&rho).unwrap(), concurrence(&rotated).unwrap());
        assert!((a - b).abs() < 1e-9, "seed {seed}: {a} vs {b}");
    }
}

#[test]
fn werner_grid_matches_closed_form() {
    for k in 0..=10 {
        let f = 0.5 + 0.05 * k as f64;
        let a = eof_two_qubit(&w(f)).unwrap();
        let b = eof_werner_closed_form(f).unwrap();
        assert!((a - b).abs() < 1e-9, "F={f}: {a} vs {b}");
    }
}

#[test]
fn lower_bound_and_additivity_on_random_states() {
    for seed in 0..300 {
        let rank = 1 + (seed as usize % 4);
        let rho = random::random_density(Dims::qubits(), rank, seed).unwrap();
        let eof = eof_two_qubit(&rho).unwrap();
        let ga = coherent_info_bound(&rho, Subsystem::A);
        let gb = coherent_info_bound(&rho, Subsystem::B);
        assert!(ga <= eof + 1e-7 && gb <= eof + 1e-7, "seed {seed}");
        if ga > 1e-9 || gb > 1e-9 {
            assert!(!ppt_check(&rho).is_ppt, "G > 0 but PPT at seed {seed}");
        }
    }
    for seed in 0..20 {
        let a = random::random_density(Dims::qubits(), 3, seed).unwrap();
        let b = random::random_density(Dims::qubits(), 2, seed + 500).unwrap();
        let ab = tensor(&a, &b).unwrap();
        for side in [Subsystem::A, Subsystem::B] {
            let lhs = coherent_info_bound(&ab, side);
            let rhs = coherent_info_bound(&a, side) + coherent_info_bound(&b, side);
            assert!((lhs - rhs).abs() < 1e-9);
        }
    }
}

#[test]
fn report_serializes_with_fixed_names() {
    let rep = measure(&w(0.75), None).unwrap();
    let v: serde_json::Value = serde_json::to_value(&rep).unwrap();
    for key in [
        "entropy_bits", "eof_bits", "concurrence", "g_a_bits", "g_b_bits", "ppt", "ppt_min_eig",
        "e_r_bits", "e_r_converged",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let back: MeasureReport = serde_json::from_value(v).unwrap();
    assert_eq!(back, rep);
    let big = measure(&DensityMatrix::maximally_mixed(Dims::new(3, 3).unwrap()), None).unwrap();
    assert!(big.eof_bits.is_none() && big.concurrence.is_none());
}
