//! Entanglement bookkeeping in the internal-energy / free-energy picture.
//!
//! Neither total entanglement nor distillable entanglement is computable, so
//! every number here is a labelled proxy:
//!
//! * total entanglement → entanglement of formation (two-qubit closed form);
//! * distillable (free) entanglement → hashing yield `max{0, 1 - S}` of the
//!   Werner-twirled state, a lower bound;
//! * an upper bound on the distillable part: `1 - H(F_max)` for Bell-diagonal
//!   inputs, otherwise the entanglement of formation itself;
//! * bound entanglement → total minus free, clipped at zero;
//! * temperature → `(E_tot - E_free) / S` with the von Neumann entropy `S`.
//!
//! The entropy in the last formula is plain von Neumann entropy. Locally
//! orthogonal mixtures have `S > 0` yet zero bound entanglement, so they sit at
//! zero temperature; that is reported, not corrected.

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::families::bell_basis;
use crate::localorth::{lo_ensemble_eof, MultiEnsemble};
use crate::measures::{binary_entropy, eof_two_qubit, von_neumann_entropy};
use crate::state::{DensityMatrix, Dims};
use crate::twirl::twirl_two_qubit_werner;

/// Off-diagonal tolerance in the Bell basis.
pub const BELL_DIAGONAL_TOL: f64 = 1e-9;
/// Entropy below this is treated as a pure state.
pub const PURE_ENTROPY_TOL: f64 = 1e-9;

pub const PROXY_NOTE: &str = "e_tot_proxy = entanglement of formation; e_free_proxy = hashing-yield lower bound \
     on distillable entanglement; e_free_upper = upper bound on distillable entanglement; \
     temperature uses von Neumann entropy";

/// Weights on `Ψ+, Ψ-, Φ+, Φ-`, or `None` if the state has Bell-basis coherences.
pub fn bell_weights(rho: &DensityMatrix) -> Result<Option<[f64; 4]>> {
    if rho.dims() != Dims::qubits() {
        return Err(Error::Dimension(format!("expected a 2x2 state, got {}", rho.dims())));
    }
    let u = bell_basis();
    let m = u.adjoint() * rho.matrix() * &u;
    for i in 0..4 {
        for j in 0..4 {
            if i != j && m[(i, j)].norm() > BELL_DIAGONAL_TOL {
                return Ok(None);
            }
        }
    }
    Ok(Some([m[(0, 0)].re, m[(1, 1)].re, m[(2, 2)].re, m[(3, 3)].re]))
}

/// Hashing yield `max{0, 1 - S(ρ)}` of a Bell-diagonal state.
pub fn hashing_yield(rho: &DensityMatrix) -> Result<f64> {
    if bell_weights(rho)?.is_none() {
        return Err(Error::Precondition(
            "hashing yield needs a Bell-diagonal state; twirl the state first".into(),
        ));
    }
    Ok((1.0 - von_neumann_entropy(rho)).max(0.0))
}

/// `1 - H(F)`, an upper bound on distillable entanglement of Werner states.
pub fn rains_upper_bound_werner(f: f64) -> Result<f64> {
    if !(0.5..=1.0).contains(&f) {
        return Err(param(format!("werner fidelity {f} outside [1/2, 1]")));
    }
    Ok(1.0 - binary_entropy(f)?)
}

/// `1 - H(w_max)` when the largest Bell weight exceeds 1/2, zero otherwise.
fn bell_diagonal_upper_bound(weights: &[f64; 4]) -> f64 {
    let top = weights.iter().copied().fold(0.0, f64::max).min(1.0);
    if top <= 0.5 {
        0.0
    } else {
        1.0 - binary_entropy(top).unwrap_or(1.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermoReport {
    pub e_tot_proxy_bits: f64,
    pub e_free_proxy_bits: f64,
    pub e_free_upper_bits: f64,
    pub e_bound_proxy_bits: f64,
    pub entropy_bits: f64,
    /// `(E_tot - E_free) / S`; absent for pure states.
    pub temperature_proxy: Option<f64>,
    /// `(E_tot - E_free_upper) / S`; the low end of the temperature interval.
    pub temperature_lower: Option<f64>,
    /// The input was not Bell-diagonal and was Werner-twirled before hashing.
    pub twirled: bool,
    /// `S ≈ 0`: free entanglement set equal to total entanglement.
    pub pure_state_convention: bool,
    pub note: String,
}

pub fn temperature_proxy(rho: &DensityMatrix) -> Result<ThermoReport> {
    let e_tot = eof_two_qubit(rho)?;
    let entropy = von_neumann_entropy(rho);
    let note = PROXY_NOTE.to_string();
    if entropy < PURE_ENTROPY_TOL {
        return Ok(ThermoReport {
            e_tot_proxy_bits: e_tot,
            e_free_proxy_bits: e_tot,
            e_free_upper_bits: e_tot,
            e_bound_proxy_bits: 0.0,
            entropy_bits: entropy,
            temperature_proxy: None,
            temperature_lower: None,
            twirled: false,
            pure_state_convention: true,
            note,
        });
    }
    let (e_free, e_upper, twirled) = match bell_weights(rho)? {
        Some(w) => (hashing_yield(rho)?, bell_diagonal_upper_bound(&w), false),
        None => (hashing_yield(&twirl_two_qubit_werner(rho)?)?, e_tot, true),
    };
    let e_free = e_free.min(e_tot);
    let e_upper = e_upper.clamp(e_free, e_tot);
    let e_bound = (e_tot - e_free).max(0.0);
    Ok(ThermoReport {
        e_tot_proxy_bits: e_tot,
        e_free_proxy_bits: e_free,
        e_free_upper_bits: e_upper,
        e_bound_proxy_bits: e_bound,
        entropy_bits: entropy,
        temperature_proxy: Some(e_bound / entropy),
        temperature_lower: Some((e_tot - e_upper).max(0.0) / entropy),
        twirled,
        pure_state_convention: false,
        note,
    })
}

/// Thermo quantities for a locally orthogonal mixture: free and total
/// entanglement coincide, so bound entanglement and temperature are zero
/// even though the entropy is not.
pub fn locally_orthogonal_report(e: &MultiEnsemble) -> Result<ThermoReport> {
    let lo = lo_ensemble_eof(e)?;
    let entropy = von_neumann_entropy(&e.to_bipartite()?.to_density());
    let pure = entropy < PURE_ENTROPY_TOL;
    Ok(ThermoReport {
        e_tot_proxy_bits: lo.total_bits,
        e_free_proxy_bits: lo.distillable_bits,
        e_free_upper_bits: lo.distillable_bits,
        e_bound_proxy_bits: 0.0,
        entropy_bits: entropy,
        temperature_proxy: (!pure).then_some(0.0),
        temperature_lower: (!pure).then_some(0.0),
        twirled: false,
        pure_state_convention: pure,
        note: "locally orthogonal mixture: distillable = formation = total entanglement; \
               zero temperature despite nonzero entropy"
            .to_string(),
    })
}

/// One line of the Werner-family table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WernerRow {
    pub fidelity: f64,
    pub entropy_bits: f64,
    pub hashing_bits: f64,
    pub rains_bits: f64,
    pub eof_bits: f64,
    pub temperature_proxy: Option<f64>,
}

pub fn werner_row(f: f64) -> Result<WernerRow> {
    let rho = crate::families::werner(f)?;
    let report = temperature_proxy(&rho)?;
    Ok(WernerRow {
        fidelity: f,
        entropy_bits: report.entropy_bits,
        hashing_bits: hashing_yield(&rho)?,
        rains_bits: if f >= 0.5 { rains_upper_bound_werner(f)? } else { 0.0 },
        eof_bits: crate::measures::eof_werner_closed_form(f)?,
        temperature_proxy: report.temperature_proxy,
    })
}
