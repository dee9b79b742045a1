//! Maximum-entropy two-qubit states at fixed concurrence.
//!
//! Closed forms for the two reference families (`ρ_p` and Werner) plus a
//! multi-start penalized simplex search over all two-qubit density matrices.

mod simplex;

pub use simplex::{nelder_mead, SimplexOptions, SimplexResult};

use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::families::{bell, rho_p, werner, BellState};
use crate::linalg::{self, c, CMatrix};
use crate::measures::{binary_entropy, concurrence, sigma_yy, spectrum_entropy, von_neumann_entropy};
use crate::random::StateRng;
use crate::state::{DensityMatrix, Dims};

const LOG2_3: f64 = 1.584_962_500_721_156_3;
const PARAMS: usize = 16;

/// `H(p)`: the spectrum of `ρ_p` is `{p, 1-p, 0, 0}`.
pub fn entropy_rho_p(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(param(format!("p = {p} outside [0, 1]")));
    }
    binary_entropy(p)
}

/// `H(F) + (1-F) log₂3`.
pub fn entropy_werner(f: f64) -> Result<f64> {
    if !(0.25..=1.0).contains(&f) {
        return Err(param(format!("Werner fidelity {f} outside [1/4, 1]")));
    }
    Ok(binary_entropy(f)? + (1.0 - f) * LOG2_3)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EqualConcurrence {
    pub concurrence: f64,
    pub p: f64,
    pub fidelity: f64,
    pub s_rho_p: f64,
    pub s_werner: f64,
    pub rho_p_wins: bool,
}

/// Entropies of `ρ_p` (with `p = c`) and the Werner state (with `F = (1+c)/2`),
/// which share concurrence `c`.
pub fn compare_equal_concurrence(c: f64) -> Result<EqualConcurrence> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(param(format!("concurrence {c} outside (0, 1]")));
    }
    let fidelity = 0.5 * (1.0 + c);
    let s_rho_p = entropy_rho_p(c)?;
    let s_werner = entropy_werner(fidelity)?;
    Ok(EqualConcurrence { concurrence: c, p: c, fidelity, s_rho_p, s_werner, rho_p_wins: s_rho_p > s_werner })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxEntOptions {
    pub restarts: usize,
    pub mu_start: f64,
    pub mu_factor: f64,
    pub mu_max: f64,
    /// Simplex evaluation budget for each penalty stage.
    pub max_evals: usize,
    pub constraint_tol: f64,
    pub seed: u64,
}

impl Default for MaxEntOptions {
    fn default() -> Self {
        MaxEntOptions {
            restarts: 32,
            mu_start: 10.0,
            mu_factor: 10.0,
            mu_max: 1e5,
            max_evals: 4000,
            constraint_tol: 1e-5,
            seed: 0,
        }
    }
}

impl MaxEntOptions {
    fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(param("at least one restart is required"));
        }
        if !(self.mu_start > 0.0 && self.mu_factor > 1.0 && self.mu_max >= self.mu_start) {
            return Err(param("penalty schedule must start positive and grow"));
        }
        if !(self.constraint_tol > 0.0) {
            return Err(param("constraint tolerance must be positive"));
        }
        Ok(())
    }

    fn schedule(&self) -> Vec<f64> {
        let mut mus = vec![self.mu_start];
        while let Some(&last) = mus.last() {
            let next = last * self.mu_factor;
            if next > self.mu_max * (1.0 + 1e-12) {
                break;
            }
            mus.push(next);
        }
        mus
    }
}

/// Where the reported state came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Analytic,
    RhoPStart,
    WernerStart,
    RandomStart,
}

#[derive(Clone, Debug)]
pub struct MaxEntResult {
    pub target_c: f64,
    pub best_state: DensityMatrix,
    pub best_entropy_bits: f64,
    pub concurrence: f64,
    pub constraint_residual: f64,
    pub restarts_used: usize,
    pub converged: bool,
    /// Index of the restart that produced the reported state.
    pub best_restart: usize,
    pub origin: Origin,
    pub evaluations: usize,
}

/// Entropy (bits) and concurrence from a single eigendecomposition.
fn entropy_and_concurrence(m: &CMatrix) -> (f64, f64) {
    let (values, vectors) = linalg::eigh(m);
    let s = spectrum_entropy(&values);
    let mut scaled = vectors;
    for (j, &p) in values.iter().enumerate() {
        scaled.column_mut(j).scale_mut(p.max(0.0).sqrt());
    }
    let tau = scaled.transpose() * sigma_yy() * &scaled;
    let mut sv: Vec<f64> = tau.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    (s, (sv[0] - sv[1] - sv[2] - sv[3]).clamp(0.0, 1.0))
}

/// Lower-triangular factor from 16 reals: 4 real diagonal entries, 6 complex below.
fn factor(x: &[f64]) -> CMatrix {
    let mut l = CMatrix::zeros(4, 4);
    let mut k = 4;
    for i in 0..4 {
        l[(i, i)] = c(x[i]);
        for j in 0..i {
            l[(i, j)] = num_complex::Complex64::new(x[k], x[k + 1]);
            k += 2;
        }
    }
    l
}

fn decode(x: &[f64]) -> Option<CMatrix> {
    let l = factor(x);
    let m = &l * l.adjoint();
    let tr = linalg::trace(&m).re;
    if !(tr.is_finite() && tr > 1e-300) {
        return None;
    }
    Some(linalg::hermitian_part(&(m / c(tr))))
}

/// Parameters reproducing `rho` (after a tiny depolarization to make it full rank).
fn encode(rho: &CMatrix) -> Vec<f64> {
    let eps = 1e-9;
    let shifted = rho * c(1.0 - eps) + CMatrix::identity(4, 4) * c(eps / 4.0);
    let chol = nalgebra::Cholesky::new(shifted).expect("depolarized state is positive definite");
    let l = chol.l();
    let mut x = vec![0.0; PARAMS];
    let mut k = 4;
    for i in 0..4 {
        x[i] = l[(i, i)].re;
        for j in 0..i {
            x[k] = l[(i, j)].re;
            x[k + 1] = l[(i, j)].im;
            k += 2;
        }
    }
    x
}

/// Moves `m` along a straight line towards `I/4` (if its concurrence is too
/// high) or towards the Bell projector (if too low) until the concurrence hits
/// `target` to bisection precision.
fn repair(m: &CMatrix, target: f64) -> CMatrix {
    let (_, c0) = entropy_and_concurrence(m);
    if (c0 - target).abs() <= 1e-13 {
        return m.clone();
    }
    let end = if c0 > target {
        CMatrix::identity(4, 4) * c(0.25)
    } else {
        bell(BellState::PsiPlus).projector().into_matrix()
    };
    let at = |t: f64| m * c(1.0 - t) + &end * c(t);
    let above = c0 > target;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let (_, cm) = entropy_and_concurrence(&at(mid));
        if (cm > target) == above {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let a = at(lo);
    let b = at(hi);
    let (_, ca) = entropy_and_concurrence(&a);
    let (_, cb) = entropy_and_concurrence(&b);
    if (ca - target).abs() <= (cb - target).abs() {
        a
    } else {
        b
    }
}

struct Candidate {
    matrix: CMatrix,
    entropy: f64,
    concurrence: f64,
    origin: Origin,
    evals: usize,
    converged: bool,
}

fn restart_seed(seed: u64, restart: usize) -> u64 {
    let mut r = StateRng::seed_from_u64(seed ^ 0x6d61_7865_6e74_0000);
    r.set_stream(restart as u64 + 1);
    r.random()
}

fn run_restart(target: f64, restart: usize, opts: &MaxEntOptions) -> Candidate {
    let (start, origin, exact) = match restart {
        0 => {
            let m = rho_p(target).expect("target already checked").into_matrix();
            (encode(&m), Origin::RhoPStart, Some(m))
        }
        1 if target <= 1.0 => {
            let m = werner(0.5 * (1.0 + target)).expect("fidelity lies in [1/2, 1]").into_matrix();
            (encode(&m), Origin::WernerStart, Some(m))
        }
        _ => {
            let mut r = StateRng::seed_from_u64(restart_seed(opts.seed, restart));
            let x: Vec<f64> = (0..PARAMS).map(|_| r.sample(StandardNormal)).collect();
            (x, Origin::RandomStart, None)
        }
    };
    let step = if exact.is_some() { 0.05 } else { 0.2 };

    let mut x = start;
    let mut evals = 0;
    let mut converged = true;
    for mu in opts.schedule() {
        let objective = |p: &[f64]| match decode(p) {
            Some(m) => {
                let (s, conc) = entropy_and_concurrence(&m);
                -s + mu * (conc - target).powi(2)
            }
            None => f64::INFINITY,
        };
        let simplex_opts = SimplexOptions { max_evals: opts.max_evals, f_tol: 1e-13, x_tol: 1e-10, initial_step: step };
        let r = nelder_mead(objective, &x, &simplex_opts);
        evals += r.evals;
        converged &= r.converged || (r.evals >= opts.max_evals && r.value.is_finite());
        x = r.x;
    }

    let raw = decode(&x).unwrap_or_else(|| CMatrix::identity(4, 4) * c(0.25));
    let fixed = repair(&raw, target);
    let (mut entropy, mut conc) = entropy_and_concurrence(&fixed);
    let mut matrix = fixed;
    if let Some(m) = exact {
        let (s0, c0) = entropy_and_concurrence(&m);
        if s0 >= entropy || (conc - target).abs() > opts.constraint_tol {
            matrix = m;
            entropy = s0;
            conc = c0;
        }
    }
    Candidate { matrix, entropy, concurrence: conc, origin, evals, converged }
}

fn analytic(target: f64, m: CMatrix, restarts: usize) -> Result<MaxEntResult> {
    let best_state = DensityMatrix::new(m, Dims::qubits())?;
    let best_entropy_bits = von_neumann_entropy(&best_state);
    let conc = concurrence(&best_state)?;
    Ok(MaxEntResult {
        target_c: target,
        best_entropy_bits,
        concurrence: conc,
        constraint_residual: (conc - target).abs(),
        best_state,
        restarts_used: restarts,
        converged: true,
        best_restart: 0,
        origin: Origin::Analytic,
        evaluations: 0,
    })
}

/// Searches for the two-qubit state of largest von Neumann entropy with
/// concurrence `c`. The result is a best-found state, defined only up to local
/// unitaries; no global optimality is claimed.
pub fn maxent_search(c_target: f64, opts: &MaxEntOptions) -> Result<MaxEntResult> {
    if !(0.0..=1.0).contains(&c_target) {
        return Err(param(format!("concurrence {c_target} outside [0, 1]")));
    }
    opts.validate()?;
    if c_target == 0.0 {
        return analytic(0.0, CMatrix::identity(4, 4) * c(0.25), 0);
    }
    if c_target == 1.0 {
        return analytic(1.0, bell(BellState::PsiPlus).projector().into_matrix(), 0);
    }

    let candidates: Vec<Candidate> =
        (0..opts.restarts).into_par_iter().map(|k| run_restart(c_target, k, opts)).collect();

    let evaluations = candidates.iter().map(|k| k.evals).sum();
    let feasible = |k: &Candidate| (k.concurrence - c_target).abs() < opts.constraint_tol;
    let best = candidates
        .iter()
        .enumerate()
        .filter(|(_, k)| feasible(k))
        .fold(None::<(usize, &Candidate)>, |acc, (i, k)| match acc {
            Some((_, b)) if b.entropy >= k.entropy => acc,
            _ => Some((i, k)),
        })
        .or_else(|| {
            candidates.iter().enumerate().min_by(|a, b| {
                (a.1.concurrence - c_target).abs().total_cmp(&(b.1.concurrence - c_target).abs())
            })
        })
        .expect("at least one restart ran");

    let (index, cand) = best;
    let best_state = DensityMatrix::renormalized(cand.matrix.clone(), Dims::qubits())?;
    let conc = concurrence(&best_state)?;
    let residual = (conc - c_target).abs();
    Ok(MaxEntResult {
        target_c: c_target,
        best_entropy_bits: von_neumann_entropy(&best_state),
        concurrence: conc,
        constraint_residual: residual,
        best_state,
        restarts_used: opts.restarts,
        converged: residual < opts.constraint_tol && cand.converged,
        best_restart: index,
        origin: cand.origin,
        evaluations,
    })
}

#[derive(Debug)]
pub struct SweepPoint {
    pub c: f64,
    pub outcome: Result<MaxEntResult>,
}

/// Runs one independent search per grid value. Seeds are derived from the
/// grid index so parallel and serial runs agree; a failing point is recorded
/// and the sweep carries on.
pub fn maxent_sweep(grid: &[f64], opts: &MaxEntOptions) -> Vec<SweepPoint> {
    grid.par_iter()
        .enumerate()
        .map(|(i, &c_target)| {
            let point_opts = MaxEntOptions { seed: point_seed(opts.seed, i), ..opts.clone() };
            SweepPoint { c: c_target, outcome: maxent_search(c_target, &point_opts) }
        })
        .collect()
}

fn point_seed(seed: u64, index: usize) -> u64 {
    let mut r = StateRng::seed_from_u64(seed);
    r.set_stream(0x7377_6565_7000_0000 + index as u64);
    r.random()
}

/// Indices `i` where the best entropy at `grid[i+1]` exceeds that at `grid[i]`
/// (by more than `tol`) although `grid[i+1] > grid[i]`. Failed points are skipped.
pub fn monotonicity_violations(points: &[SweepPoint], tol: f64) -> Vec<usize> {
    points
        .windows(2)
        .enumerate()
        .filter_map(|(i, w)| match (&w[0].outcome, &w[1].outcome) {
            (Ok(a), Ok(b)) if w[1].c > w[0].c && b.best_entropy_bits > a.best_entropy_bits + tol => Some(i),
            _ => None,
        })
        .collect()
}

#[cfg(test)]
mod tests;
