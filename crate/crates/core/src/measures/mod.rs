//! Entropies and entanglement measures. All logarithms are base 2.
//!
//! `eof_bits` everywhere is the entanglement of formation, which downstream
//! reports also use as the stand-in for the (uncomputable) total entanglement.

mod barrier;
mod relent;

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::linalg::{self, c, CMatrix};
use crate::state::{self, DensityMatrix, Dims, Ensemble, PureState, Subsystem};

pub use relent::{rel_ent_entanglement, RelEntMethod, RelEntOptions, RelEntResult};

/// Eigenvalues in `[-CLIP_TOL, 0)` are treated as exact zeros.
pub const CLIP_TOL: f64 = 1e-10;
/// Threshold on the minimum partial-transpose eigenvalue.
pub const PPT_TOL: f64 = 1e-10;

fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// `H(x) = -x log x - (1-x) log(1-x)`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&x) {
        return Err(param(format!("binary entropy argument {x} outside [0, 1]")));
    }
    let x = x.clamp(0.0, 1.0);
    Ok((-xlog2x(x) - xlog2x(1.0 - x)).max(0.0))
}

/// Shannon entropy of a spectrum, with slightly negative entries clipped.
pub fn spectrum_entropy(values: &[f64]) -> f64 {
    let s: f64 = values.iter().map(|&v| -xlog2x(v)).sum();
    s.max(0.0)
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    spectrum_entropy(&rho.eigenvalues())
}

/// Entropy of either reduction of a pure state, computed from its Schmidt spectrum.
pub fn pure_entanglement(psi: &PureState) -> f64 {
    let m = psi.coefficient_matrix();
    let reduced = if m.nrows() <= m.ncols() { &m * m.adjoint() } else { m.adjoint() * &m };
    spectrum_entropy(&linalg::eigh(&reduced).0)
}

/// Average pure-state entanglement `Σ p_i E(ψ_i)` of an explicit ensemble.
pub fn ensemble_eof(e: &Ensemble) -> f64 {
    e.members().iter().map(|(p, s)| p * pure_entanglement(s)).sum()
}

fn require_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dims() != Dims::qubits() {
        return Err(Error::Dimension(format!("expected a 2x2 state, got {}", rho.dims())));
    }
    Ok(())
}

/// `σ_y ⊗ σ_y` in the product basis (real).
pub fn sigma_yy() -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 3)] = c(-1.0);
    m[(1, 2)] = c(1.0);
    m[(2, 1)] = c(1.0);
    m[(3, 0)] = c(-1.0);
    m
}

/// Spin-flipped state `(σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`, conjugation in the product basis.
pub fn spin_flip(rho: &DensityMatrix) -> Result<CMatrix> {
    require_qubits(rho)?;
    let s = sigma_yy();
    Ok(&s * rho.matrix().map(|z| z.conj()) * &s)
}

/// Square roots of the eigenvalues of `ρ ρ̃`, descending.
///
/// Computed as the singular values of `τ = Vᵀ (σ_y ⊗ σ_y) V`, where the columns
/// of `V` are the eigenvectors of ρ scaled by the square roots of their
/// eigenvalues. `τ τ†` is similar to `ρ ρ̃`, so the spectra agree, but the
/// singular values carry absolute rather than square-root error when ρ is
/// rank deficient.
pub fn wootters_lambdas(rho: &DensityMatrix) -> Result<[f64; 4]> {
    require_qubits(rho)?;
    let (values, vectors) = linalg::eigh(rho.matrix());
    let mut scaled = vectors;
    for (j, &p) in values.iter().enumerate() {
        let root = if p < -CLIP_TOL { 0.0 } else { p.max(0.0).sqrt() };
        scaled.column_mut(j).scale_mut(root);
    }
    let tau = scaled.transpose() * sigma_yy() * &scaled;
    let sv = tau.singular_values();
    let mut lambdas = [0.0; 4];
    lambdas.iter_mut().zip(sv.iter()).for_each(|(slot, &v)| *slot = v);
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok(lambdas)
}

/// Two-qubit concurrence `max{0, λ1 - λ2 - λ3 - λ4}`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    let l = wootters_lambdas(rho)?;
    Ok((l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0))
}

/// `H((1 + √(1 - C²)) / 2)`.
pub fn eof_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    let x = 0.5 * (1.0 + (1.0 - c * c).max(0.0).sqrt());
    binary_entropy(x).expect("argument lies in [1/2, 1]")
}

pub fn eof_two_qubit(rho: &DensityMatrix) -> Result<f64> {
    Ok(eof_from_concurrence(concurrence(rho)?))
}

/// Closed form for the Werner family: `H(1/2 + √(F(1-F)))` above `F = 1/2`, zero below.
pub fn eof_werner_closed_form(f: f64) -> Result<f64> {
    if !(0.25..=1.0).contains(&f) {
        return Err(param(format!("werner fidelity {f} outside [1/4, 1]")));
    }
    if f <= 0.5 {
        return Ok(0.0);
    }
    binary_entropy(0.5 + (f * (1.0 - f)).sqrt())
}

/// `G_C(ρ) = S(Tr_C ρ) - S(ρ)`, a lower bound on the entanglement of formation.
/// May be negative.
pub fn coherent_info_bound(rho: &DensityMatrix, traced: Subsystem) -> f64 {
    von_neumann_entropy(&state::partial_trace(rho, traced)) - von_neumann_entropy(rho)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PptResult {
    pub is_ppt: bool,
    pub min_eig: f64,
}

/// Positivity of the partial transpose (taken on B).
pub fn ppt_check(rho: &DensityMatrix) -> PptResult {
    let pt = state::partial_transpose(rho, Subsystem::B);
    let min_eig = linalg::eigh(&pt).0.last().copied().unwrap_or(0.0);
    PptResult { is_ppt: min_eig >= -PPT_TOL, min_eig }
}

/// Eigenvalues of `σ` at or below this are treated as outside its support.
const SUPPORT_TOL: f64 = 1e-12;

/// Quantum relative entropy `Tr ρ (log ρ - log σ)` in bits.
///
/// Returns `f64::INFINITY` when the support of `ρ` is not contained in the
/// support of `σ`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dims() != sigma.dims() {
        return Err(Error::Dimension(format!("{} vs {}", rho.dims(), sigma.dims())));
    }
    let (values, vectors) = linalg::eigh(sigma.matrix());
    let mut cross = 0.0;
    for (k, &s) in values.iter().enumerate() {
        let v = vectors.column(k);
        let weight = (v.adjoint() * rho.matrix() * v)[(0, 0)].re;
        if s <= SUPPORT_TOL {
            if weight > 1e-10 {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += weight * s.log2();
    }
    Ok((-von_neumann_entropy(rho) - cross).max(0.0))
}

/// Everything this crate can compute about one state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub entropy_bits: f64,
    /// Entanglement of formation (two-qubit only); also the total-entanglement proxy.
    pub eof_bits: Option<f64>,
    pub concurrence: Option<f64>,
    pub g_a_bits: f64,
    pub g_b_bits: f64,
    pub ppt: bool,
    pub ppt_min_eig: f64,
    pub e_r_bits: Option<f64>,
    pub e_r_converged: Option<bool>,
}

/// Builds a [`MeasureReport`]. The relative entropy of entanglement is only
/// computed for 2x2 states and only when options are passed.
pub fn measure(rho: &DensityMatrix, e_r: Option<&RelEntOptions>) -> Result<MeasureReport> {
    let qubits = rho.dims() == Dims::qubits();
    let ppt = ppt_check(rho);
    let (concurrence, eof_bits) = if qubits {
        let c = concurrence(rho)?;
        (Some(c), Some(eof_from_concurrence(c)))
    } else {
        (None, None)
    };
    let (e_r_bits, e_r_converged) = match e_r {
        Some(opts) if qubits => {
            let r = rel_ent_entanglement(rho, opts)?;
            (Some(r.e_r_bits), Some(r.converged))
        }
        _ => (None, None),
    };
    Ok(MeasureReport {
        entropy_bits: von_neumann_entropy(rho),
        eof_bits,
        concurrence,
        g_a_bits: coherent_info_bound(rho, Subsystem::A),
        g_b_bits: coherent_info_bound(rho, Subsystem::B),
        ppt: ppt.is_ppt,
        ppt_min_eig: ppt.min_eig,
        e_r_bits,
        e_r_converged,
    })
}

#[cfg(test)]
mod tests;
