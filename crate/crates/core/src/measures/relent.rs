//! Relative entropy of entanglement for two qubits.
//!
//! Minimizes `S(ρ‖σ)` over σ in the PPT set, which coincides with the separable
//! set for 2x2 systems. The objective is convex in σ and the feasible set is
//! convex. The default solver is the log-barrier Newton method in `barrier`.
//! The alternative projected-gradient method works as follows:
//!
//! * gradient of `-Tr ρ log σ` from the divided differences of `log` in the
//!   eigenbasis of σ;
//! * projection onto `{σ ⪰ εI, Tr σ = 1} ∩ {σ^Γ ⪰ 0}` by Dykstra's alternating
//!   projections, followed by an exact feasibility repair (mixing with `I/4`);
//! * Armijo backtracking with step halving, growing the step after each
//!   accepted move;
//! * several feasible starting points, keeping the best.
//!
//! Every returned σ is exactly feasible, so the value is an upper bound on the
//! true minimum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::bell_basis;
use crate::linalg::{self, c, CMatrix};
use crate::random;
use crate::state::{partial_transpose_matrix, DensityMatrix, Dims, Subsystem};

use super::barrier::Barrier;
use super::{ppt_check, von_neumann_entropy};

/// Eigenvalue floor kept on σ so that `log σ` stays finite.
const EIG_FLOOR: f64 = 1e-12;
const DYKSTRA_MAX: usize = 500;
const DYKSTRA_TOL: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelEntOptions {
    pub method: RelEntMethod,
    /// Accuracy target in bits; used as the slack in `E_r ≤ E_f` checks.
    pub tolerance: f64,
    /// Projected gradient only: a restart stops once one accepted step improves the objective by less than this.
    pub improvement_tol: f64,
    pub max_iterations: usize,
    /// Projected gradient only.
    pub restarts: usize,
    /// Projected gradient only (random separable starts).
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelEntMethod {
    /// Log-barrier Newton path from `I/4`; the reported value exceeds the
    /// minimum by at most `tolerance / 100`.
    #[default]
    InteriorPoint,
    /// Projected gradient with Dykstra projections and multiple starts.
    ProjectedGradient,
}

impl Default for RelEntOptions {
    fn default() -> Self {
        RelEntOptions {
            method: RelEntMethod::InteriorPoint,
            tolerance: 1e-4,
            improvement_tol: 1e-6,
            max_iterations: 5000,
            restarts: 8,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelEntResult {
    pub e_r_bits: f64,
    /// True when the best restart stopped on the improvement criterion.
    pub converged: bool,
    pub iterations: usize,
    pub restarts_used: usize,
    /// The separable (PPT) state attaining `e_r_bits`.
    pub closest_separable: DensityMatrix,
}

pub fn rel_ent_entanglement(rho: &DensityMatrix, opts: &RelEntOptions) -> Result<RelEntResult> {
    if rho.dims() != Dims::qubits() {
        return Err(Error::Dimension(format!(
            "relative entropy of entanglement is only implemented for 2x2 states (got {}): \
             PPT≠separable beyond 2×2 and 2×3",
            rho.dims()
        )));
    }
    if ppt_check(rho).is_ppt {
        return Ok(RelEntResult {
            e_r_bits: 0.0,
            converged: true,
            iterations: 0,
            restarts_used: 0,
            closest_separable: rho.clone(),
        });
    }

    if opts.method == RelEntMethod::InteriorPoint {
        let barrier = Barrier::new(rho.matrix(), von_neumann_entropy(rho));
        let run = barrier.solve(&CMatrix::identity(4, 4).unscale(4.0), opts.tolerance * 1e-2, opts.max_iterations);
        return Ok(RelEntResult {
            e_r_bits: run.value.max(0.0),
            converged: run.converged,
            iterations: run.iterations,
            restarts_used: 1,
            closest_separable: DensityMatrix::renormalized(run.sigma, Dims::qubits())?,
        });
    }

    let problem = Problem::new(rho);
    let mut best: Option<(f64, CMatrix, bool)> = None;
    let mut iterations = 0;
    let starts = starting_points(rho, opts);
    let restarts_used = starts.len();
    for start in starts {
        let run = problem.descend(project_feasible(&start), opts);
        iterations += run.iterations;
        if best.as_ref().is_none_or(|(v, _, _)| run.value < *v) {
            best = Some((run.value, run.sigma, run.converged));
        }
    }
    let (value, sigma, converged) = best.expect("at least one starting point");
    let closest = DensityMatrix::renormalized(sigma, Dims::qubits())?;
    Ok(RelEntResult {
        e_r_bits: value.max(0.0),
        converged,
        iterations,
        restarts_used,
        closest_separable: closest,
    })
}

fn starting_points(rho: &DensityMatrix, opts: &RelEntOptions) -> Vec<CMatrix> {
    let n = 4;
    let mixed = CMatrix::identity(n, n).unscale(4.0);
    let mut starts = vec![mixed.clone(), closest_bell_diagonal_separable(rho), depolarize_to_ppt(rho.matrix())];
    let mut rng = random::rng(opts.seed);
    while starts.len() < opts.restarts.max(1) {
        starts.push(random::random_separable_with(Dims::qubits(), 4, &mut rng).into_matrix());
    }
    starts.truncate(opts.restarts.max(1));
    starts
}

/// Bell-basis weights of ρ projected onto the separable Bell-diagonal states
/// (all weights at most 1/2).
fn closest_bell_diagonal_separable(rho: &DensityMatrix) -> CMatrix {
    let u = bell_basis();
    let in_bell = u.adjoint() * rho.matrix() * &u;
    let mut w: Vec<f64> = (0..4).map(|k| in_bell[(k, k)].re.max(0.0)).collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    let (top, &max) = w.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    if max > 0.5 {
        let rest = 1.0 - max;
        for (k, x) in w.iter_mut().enumerate() {
            *x = if k == top {
                0.5
            } else if rest > 0.0 {
                *x * 0.5 / rest
            } else {
                0.5 / 3.0
            };
        }
    }
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(4, w.iter().map(|&x| c(x))));
    &u * d * u.adjoint()
}

/// Mixes `m` with `I/4` just enough to make its partial transpose positive.
fn depolarize_to_ppt(m: &CMatrix) -> CMatrix {
    let min = linalg::eigh(&pt(m)).0[3];
    if min >= 0.0 {
        return m.clone();
    }
    let t = -min / (-min + 0.25);
    m.scale(1.0 - t) + CMatrix::identity(4, 4).scale(0.25 * t)
}

fn pt(m: &CMatrix) -> CMatrix {
    partial_transpose_matrix(m, Dims::qubits(), Subsystem::B)
}

/// Projection onto `{σ ⪰ εI, Tr σ = 1}`.
fn project_states(m: &CMatrix) -> CMatrix {
    let (values, vectors) = linalg::eigh(&linalg::hermitian_part(m));
    let projected = project_simplex_with_floor(&values, EIG_FLOOR);
    linalg::reconstruct(&projected, &vectors)
}

/// Euclidean projection of `x` onto `{y ≥ floor, Σ y = 1}`.
fn project_simplex_with_floor(x: &[f64], floor: f64) -> Vec<f64> {
    let n = x.len();
    let budget = 1.0 - floor * n as f64;
    // Project (x - floor) onto the simplex of mass `budget`, then shift back.
    let mut sorted: Vec<f64> = x.iter().map(|v| v - floor).collect();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (k, &v) in sorted.iter().enumerate() {
        cumulative += v;
        let candidate = (cumulative - budget) / (k + 1) as f64;
        if v - candidate > 0.0 {
            theta = candidate;
        }
    }
    x.iter().map(|v| (v - floor - theta).max(0.0) + floor).collect()
}

/// Projection onto `{σ : σ^Γ ⪰ 0}`; the partial transpose is an isometry.
fn project_ppt(m: &CMatrix) -> CMatrix {
    let clipped = linalg::hermitian_fn(&linalg::hermitian_part(&pt(m)), |v| v.max(0.0));
    pt(&clipped)
}

/// Dykstra's algorithm for the projection onto the intersection, then an exact
/// repair so the result is a PPT density matrix.
fn project_feasible(y: &CMatrix) -> CMatrix {
    let n = y.nrows();
    let mut x = y.clone();
    let mut p = CMatrix::zeros(n, n);
    let mut q = CMatrix::zeros(n, n);
    let mut u = project_states(&x);
    for _ in 0..DYKSTRA_MAX {
        u = project_states(&(&x + &p));
        p = &x + &p - &u;
        let x_next = project_ppt(&(&u + &q));
        q = &u + &q - &x_next;
        let moved = linalg::max_abs_diff(&x_next, &x);
        let gap = linalg::max_abs_diff(&x_next, &u);
        x = x_next;
        if moved < DYKSTRA_TOL && gap < DYKSTRA_TOL {
            break;
        }
    }
    linalg::hermitian_part(&depolarize_to_ppt(&u))
}

struct Problem {
    rho: CMatrix,
    entropy: f64,
}

struct Run {
    value: f64,
    sigma: CMatrix,
    iterations: usize,
    converged: bool,
}

impl Problem {
    fn new(rho: &DensityMatrix) -> Self {
        Problem { rho: rho.matrix().clone(), entropy: von_neumann_entropy(rho) }
    }

    /// `S(ρ‖σ)` in bits, plus the eigensystem of σ for reuse in the gradient.
    fn value(&self, sigma: &CMatrix) -> (f64, Vec<f64>, CMatrix) {
        let (values, vectors) = linalg::eigh(sigma);
        let rotated = vectors.adjoint() * &self.rho * &vectors;
        let mut cross = 0.0;
        for (k, &s) in values.iter().enumerate() {
            cross += rotated[(k, k)].re * s.max(EIG_FLOOR * 1e-3).log2();
        }
        (-self.entropy - cross, values, vectors)
    }

    /// Gradient of `-Tr ρ log₂ σ` with respect to σ.
    fn gradient(&self, values: &[f64], vectors: &CMatrix) -> CMatrix {
        let n = values.len();
        let mut rotated = vectors.adjoint() * &self.rho * vectors;
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (values[i].max(EIG_FLOOR * 1e-3), values[j].max(EIG_FLOOR * 1e-3));
                let divided = if (a - b).abs() <= 1e-12 * a.max(b) {
                    1.0 / a
                } else {
                    (a.ln() - b.ln()) / (a - b)
                };
                rotated[(i, j)] *= -divided / std::f64::consts::LN_2;
            }
        }
        vectors * rotated * vectors.adjoint()
    }

    fn descend(&self, start: CMatrix, opts: &RelEntOptions) -> Run {
        let mut sigma = start;
        let (mut value, mut values, mut vectors) = self.value(&sigma);
        let mut step = 0.05;
        let mut converged = false;
        let mut iterations = 0;
        while iterations < opts.max_iterations {
            iterations += 1;
            let grad = self.gradient(&values, &vectors);
            let mut accepted = None;
            for _ in 0..60 {
                let candidate = project_feasible(&(&sigma - grad.scale(step)));
                let delta = &candidate - &sigma;
                let (cand_value, cand_values, cand_vectors) = self.value(&candidate);
                let linear = grad.iter().zip(delta.iter()).map(|(g, d)| (g.conj() * d).re).sum::<f64>();
                let quadratic = delta.iter().map(|d| d.norm_sqr()).sum::<f64>() / (2.0 * step);
                if cand_value <= value + linear + quadratic + 1e-15 {
                    accepted = Some((candidate, cand_value, cand_values, cand_vectors));
                    break;
                }
                step *= 0.5;
            }
            let Some((candidate, cand_value, cand_values, cand_vectors)) = accepted else {
                converged = true;
                break;
            };
            let improvement = value - cand_value;
            sigma = candidate;
            value = cand_value;
            values = cand_values;
            vectors = cand_vectors;
            if improvement < opts.improvement_tol {
                converged = true;
                break;
            }
            step *= 2.0;
        }
        Run { value, sigma, iterations, converged }
    }
}
