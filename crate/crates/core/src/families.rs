//! Named state families.
//!
//! Bell-basis labelling follows the convention used throughout this crate:
//!
//! ```text
//! Ψ± = (|00⟩ ± |11⟩)/√2        Φ± = (|01⟩ ± |10⟩)/√2
//! ```
//!
//! so `Ψ+` coincides with the two-qubit maximally entangled vector
//! `(1/√N) Σ_i |ii⟩` used by the isotropic family. Werner states put weight `F`
//! on `Ψ+` and `(1-F)/3` on each of the other three.

use std::fmt;
use std::str::FromStr;

use crate::error::{param, Error, Result};
use crate::linalg::{c, CMatrix, CVector};
use crate::state::{DensityMatrix, Dims, PureState};

const FAMILY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BellState {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PsiPlus,
        BellState::PsiMinus,
        BellState::PhiPlus,
        BellState::PhiMinus,
    ];
}

impl fmt::Display for BellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BellState::PsiPlus => "psi+",
            BellState::PsiMinus => "psi-",
            BellState::PhiPlus => "phi+",
            BellState::PhiMinus => "phi-",
        })
    }
}

pub fn bell(which: BellState) -> PureState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let amps = match which {
        BellState::PsiPlus => [h, 0.0, 0.0, h],
        BellState::PsiMinus => [h, 0.0, 0.0, -h],
        BellState::PhiPlus => [0.0, h, h, 0.0],
        BellState::PhiMinus => [0.0, h, -h, 0.0],
    };
    PureState::normalized(CVector::from_iterator(4, amps.iter().map(|&x| c(x))), Dims::qubits())
        .expect("bell vectors are unit norm")
}

/// Unitary whose columns are `Ψ+, Ψ-, Φ+, Φ-` in the product basis.
pub fn bell_basis() -> CMatrix {
    let cols: Vec<CVector> = BellState::ALL.iter().map(|&b| bell(b).amplitudes().clone()).collect();
    CMatrix::from_columns(&cols)
}

/// A state named by family and parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum StateFamily {
    Bell(BellState),
    /// Two-qubit Werner state with `Ψ+` weight `F ∈ [1/4, 1]`.
    Werner(f64),
    /// `N x N` isotropic state with maximally-entangled fidelity `F ∈ [0, 1]`.
    Isotropic { n: usize, fidelity: f64 },
    /// `a|00⟩ + b|11⟩` with `a² + b² = 1`.
    Schmidt { a: f64, b: f64 },
    /// `p |Ψ+⟩⟨Ψ+| + (1-p) |01⟩⟨01|`.
    RhoP(f64),
    /// `(1/√M) Σ_{i<M} |ii⟩` in `N x N`.
    PsiM { n: usize, m: usize },
    MaxEntangled(usize),
    ProductBasis { i: usize, j: usize, dims: Dims },
}

/// Output of [`make_state`]: pure families stay vectors.
#[derive(Clone, Debug, PartialEq)]
pub enum State {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl State {
    pub fn density(&self) -> DensityMatrix {
        match self {
            State::Pure(p) => p.projector(),
            State::Mixed(m) => m.clone(),
        }
    }

    pub fn dims(&self) -> Dims {
        match self {
            State::Pure(p) => p.dims(),
            State::Mixed(m) => m.dims(),
        }
    }

    pub fn as_pure(&self) -> Option<&PureState> {
        match self {
            State::Pure(p) => Some(p),
            State::Mixed(_) => None,
        }
    }
}

pub fn make_state(family: &StateFamily) -> Result<State> {
    Ok(match *family {
        StateFamily::Bell(b) => State::Pure(bell(b)),
        StateFamily::Werner(f) => State::Mixed(werner(f)?),
        StateFamily::Isotropic { n, fidelity } => State::Mixed(isotropic(n, fidelity)?),
        StateFamily::Schmidt { a, b } => State::Pure(schmidt(a, b)?),
        StateFamily::RhoP(p) => State::Mixed(rho_p(p)?),
        StateFamily::PsiM { n, m } => State::Pure(psi_m(n, m)?),
        StateFamily::MaxEntangled(n) => State::Pure(psi_m(n, n)?),
        StateFamily::ProductBasis { i, j, dims } => State::Pure(PureState::basis(i, j, dims)?),
    })
}

fn check_unit_interval(name: &str, x: f64, lo: f64) -> Result<()> {
    if !(x >= lo - FAMILY_TOL && x <= 1.0 + FAMILY_TOL) {
        return Err(param(format!("{name} = {x} outside [{lo}, 1]")));
    }
    Ok(())
}

pub fn werner(f: f64) -> Result<DensityMatrix> {
    check_unit_interval("werner F", f, 0.25)?;
    bell_diagonal([f, (1.0 - f) / 3.0, (1.0 - f) / 3.0, (1.0 - f) / 3.0])
}

/// Bell-diagonal state with weights on `Ψ+, Ψ-, Φ+, Φ-`.
pub fn bell_diagonal(weights: [f64; 4]) -> Result<DensityMatrix> {
    let total: f64 = weights.iter().sum();
    if weights.iter().any(|&w| w < -FAMILY_TOL) || (total - 1.0).abs() > FAMILY_TOL {
        return Err(param(format!("invalid Bell weights {weights:?}")));
    }
    let u = bell_basis();
    let d = CMatrix::from_diagonal(&CVector::from_iterator(4, weights.iter().map(|&w| c(w.max(0.0)))));
    Ok(DensityMatrix::from_raw(&u * d * u.adjoint(), Dims::qubits()))
}

pub fn isotropic(n: usize, fidelity: f64) -> Result<DensityMatrix> {
    if n < 2 {
        return Err(param(format!("isotropic local dimension must be >= 2, got {n}")));
    }
    check_unit_interval("isotropic F", fidelity, 0.0)?;
    let dims = Dims::new(n, n)?;
    let n2 = (n * n) as f64;
    let p_plus = psi_m(n, n)?.projector().into_matrix();
    let id = CMatrix::identity(n * n, n * n);
    let m = (id.scale((1.0 - fidelity) / n2) + p_plus.scale(fidelity - 1.0 / n2)).scale(n2 / (n2 - 1.0));
    Ok(DensityMatrix::from_raw(m, dims))
}

pub fn schmidt(a: f64, b: f64) -> Result<PureState> {
    if ((a * a + b * b) - 1.0).abs() > FAMILY_TOL {
        return Err(param(format!("schmidt coefficients need a² + b² = 1, got {}", a * a + b * b)));
    }
    let v = CVector::from_vec(vec![c(a), c(0.0), c(0.0), c(b)]);
    PureState::normalized(v, Dims::qubits())
}

pub fn rho_p(p: f64) -> Result<DensityMatrix> {
    check_unit_interval("p", p, 0.0)?;
    let d = Dims::qubits();
    let bell_part = bell(BellState::PsiPlus).projector();
    let flip = PureState::basis(0, 1, d)?.projector();
    DensityMatrix::mixture(&[(p, &bell_part), (1.0 - p, &flip)])
}

pub fn psi_m(n: usize, m: usize) -> Result<PureState> {
    if m < 1 || m > n {
        return Err(param(format!("psi_M needs 1 <= M <= N, got N={n}, M={m}")));
    }
    let dims = Dims::new(n, n)?;
    let mut v = CVector::zeros(dims.total());
    let amp = 1.0 / (m as f64).sqrt();
    for i in 0..m {
        v[dims.index(i, i)] = c(amp);
    }
    PureState::normalized(v, dims)
}

impl FromStr for BellState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "psi+" | "psiplus" => Ok(BellState::PsiPlus),
            "psi-" | "psiminus" => Ok(BellState::PsiMinus),
            "phi+" | "phiplus" => Ok(BellState::PhiPlus),
            "phi-" | "phiminus" => Ok(BellState::PhiMinus),
            other => Err(param(format!("unknown Bell state '{other}' (psi+, psi-, phi+, phi-)"))),
        }
    }
}

/// Grammar: `family:param[,param...]`, e.g. `werner:0.9`, `isotropic:3,0.66`,
/// `schmidt:0.8,0.6`, `bell:psi+`, `rho_p:0.5`, `psi_m:4,2`, `max_entangled:3`,
/// `product_basis:0,1` or `product_basis:i,j,dA,dB`.
impl FromStr for StateFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let args: Vec<&str> = if args.trim().is_empty() {
            Vec::new()
        } else {
            args.split(',').map(str::trim).collect()
        };
        let float = |k: usize| -> Result<f64> {
            args.get(k)
                .ok_or_else(|| param(format!("'{name}' is missing parameter {}", k + 1)))?
                .parse::<f64>()
                .map_err(|e| param(format!("'{name}' parameter {}: {e}", k + 1)))
        };
        let int = |k: usize| -> Result<usize> {
            args.get(k)
                .ok_or_else(|| param(format!("'{name}' is missing parameter {}", k + 1)))?
                .parse::<usize>()
                .map_err(|e| param(format!("'{name}' parameter {}: {e}", k + 1)))
        };
        let arity = |expected: &[usize]| -> Result<()> {
            if expected.contains(&args.len()) {
                Ok(())
            } else {
                Err(param(format!("'{name}' takes {expected:?} parameters, got {}", args.len())))
            }
        };
        let family = match name.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "bell" => {
                arity(&[1])?;
                StateFamily::Bell(args[0].parse()?)
            }
            "werner" => {
                arity(&[1])?;
                StateFamily::Werner(float(0)?)
            }
            "isotropic" => {
                arity(&[2])?;
                StateFamily::Isotropic { n: int(0)?, fidelity: float(1)? }
            }
            "schmidt" => {
                arity(&[2])?;
                StateFamily::Schmidt { a: float(0)?, b: float(1)? }
            }
            "rho_p" | "rhop" => {
                arity(&[1])?;
                StateFamily::RhoP(float(0)?)
            }
            "psi_m" | "psim" => {
                arity(&[2])?;
                StateFamily::PsiM { n: int(0)?, m: int(1)? }
            }
            "max_entangled" => {
                arity(&[1])?;
                StateFamily::MaxEntangled(int(0)?)
            }
            "product_basis" => {
                arity(&[2, 4])?;
                let dims = if args.len() == 4 { Dims::new(int(2)?, int(3)?)? } else { Dims::qubits() };
                StateFamily::ProductBasis { i: int(0)?, j: int(1)?, dims }
            }
            other => return Err(param(format!("unknown state family '{other}'"))),
        };
        Ok(family)
    }
}
