//! The `U ⊗ U*` twirl.
//!
//! Averaging `(U ⊗ U*) ρ (U ⊗ U*)†` over the Haar measure maps every `N x N`
//! state onto the isotropic family
//!
//! ```text
//! σ(F) = N²/(N²-1) · ((1-F) I/N² + (F - 1/N²) P+)
//! ```
//!
//! with `F = ⟨P+|ρ|P+⟩` unchanged. The average is applied here in that closed
//! form; random unitaries only show up in tests.
//!
//! For two qubits `P+` is the Bell vector `Ψ+ = (|00⟩+|11⟩)/√2`, so the image is
//! the Werner state with weight `F` on `Ψ+` and `(1-F)/3` on the others. No
//! basis change is needed between the two forms.

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::families::{self, bell, bell_diagonal, BellState};
use crate::measures::{binary_entropy, eof_werner_closed_form};
use crate::state::{DensityMatrix, Dims};

/// `|a_twirled - a_pure|` below this counts as preserved.
pub const PRESERVATION_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsotropicParams {
    pub n: usize,
    pub fidelity: f64,
}

impl IsotropicParams {
    pub fn new(n: usize, fidelity: f64) -> Result<Self> {
        if n < 2 {
            return Err(param(format!("local dimension must be >= 2, got {n}")));
        }
        if !(0.0..=1.0).contains(&fidelity) {
            return Err(param(format!("fidelity {fidelity} outside [0, 1]")));
        }
        Ok(IsotropicParams { n, fidelity })
    }

    pub fn state(&self) -> Result<DensityMatrix> {
        families::isotropic(self.n, self.fidelity)
    }
}

fn square_dim(rho: &DensityMatrix) -> Result<usize> {
    let d = rho.dims();
    if d.a != d.b {
        return Err(Error::Dimension(format!("twirl needs an N x N system, got {d}")));
    }
    Ok(d.a)
}

/// `⟨P+|ρ|P+⟩` with `P+ = (1/√N) Σ |ii⟩`.
pub fn maxent_fidelity(rho: &DensityMatrix) -> Result<f64> {
    let n = square_dim(rho)?;
    let d = rho.dims();
    let m = rho.matrix();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += m[(d.index(i, i), d.index(j, j))].re;
        }
    }
    Ok((s / n as f64).clamp(0.0, 1.0))
}

pub fn isotropic_params(rho: &DensityMatrix) -> Result<IsotropicParams> {
    IsotropicParams::new(square_dim(rho)?, maxent_fidelity(rho)?)
}

/// Projection onto the isotropic family. Idempotent.
pub fn twirl_isotropic(rho: &DensityMatrix) -> Result<DensityMatrix> {
    isotropic_params(rho)?.state()
}

/// Two-qubit twirl written in the Bell basis: weight `F = ⟨Ψ+|ρ|Ψ+⟩` on `Ψ+`,
/// `(1-F)/3` on each other Bell state. `F` may lie below 1/4 here.
pub fn twirl_two_qubit_werner(rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dims() != Dims::qubits() {
        return Err(Error::Dimension(format!("expected a 2x2 state, got {}", rho.dims())));
    }
    let f = rho.expectation(&bell(BellState::PsiPlus)).clamp(0.0, 1.0);
    let rest = (1.0 - f) / 3.0;
    bell_diagonal([f, rest, rest, rest])
}

/// Entanglement of formation before and after twirling `a|00⟩ + b|11⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Preservation {
    pub a: f64,
    pub b: f64,
    /// `(a + b)² / 2`.
    pub fidelity: f64,
    pub e_pure: f64,
    pub e_twirled: f64,
    pub preserved: bool,
    /// `|1/2 + √(F(1-F)) - max(a², b²)|`, zero up to rounding.
    pub identity_residual: f64,
}

/// Twirls `a|00⟩ + √(1-a²)|11⟩` in its Schmidt basis and compares entanglement
/// of formation before and after.
pub fn check_preservation(a: f64) -> Result<Preservation> {
    if !(0.0..=1.0).contains(&a) {
        return Err(param(format!("a = {a} outside [0, 1]")));
    }
    let b = (1.0 - a * a).max(0.0).sqrt();
    let fidelity = ((a + b) * (a + b) / 2.0).min(1.0);
    let e_pure = binary_entropy(a * a)?;
    let e_twirled = eof_werner_closed_form(fidelity)?;
    let identity_residual = (0.5 + (fidelity * (1.0 - fidelity)).sqrt() - (a * a).max(b * b)).abs();
    Ok(Preservation {
        a,
        b,
        fidelity,
        e_pure,
        e_twirled,
        preserved: (e_pure - e_twirled).abs() < PRESERVATION_TOL,
        identity_residual,
    })
}

/// Upper bound on the entanglement of formation of an isotropic state, from
/// its decomposition into the separable `σ(1/N)` and `P+`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsotropicBound {
    pub bits: f64,
    /// `F ≤ 1/N`: the state is separable and the bound is zero.
    pub separable: bool,
}

pub fn isotropic_eof_upper_bound(n: usize, f: f64) -> Result<IsotropicBound> {
    IsotropicParams::new(n, f)?;
    let n_f = n as f64;
    if f <= 1.0 / n_f {
        return Ok(IsotropicBound { bits: 0.0, separable: true });
    }
    Ok(IsotropicBound { bits: (n_f * f - 1.0) / (n_f - 1.0) * n_f.log2(), separable: false })
}

/// One row of the higher-dimensional comparison: `Ψ_M` before and after the twirl.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwirlDecrease {
    pub n: usize,
    pub m: usize,
    pub fidelity: f64,
    /// `log₂ M`.
    pub e_pure: f64,
    pub twirled_upper_bound: f64,
    pub gap: f64,
}

pub fn psi_m_twirl_decrease(n: usize, m: usize) -> Result<TwirlDecrease> {
    let psi = families::psi_m(n, m)?;
    let e_pure = crate::measures::pure_entanglement(&psi);
    let fidelity = maxent_fidelity(&psi.projector())?;
    let bound = isotropic_eof_upper_bound(n, fidelity)?.bits;
    Ok(TwirlDecrease { n, m, fidelity, e_pure, twirled_upper_bound: bound, gap: e_pure - bound })
}
