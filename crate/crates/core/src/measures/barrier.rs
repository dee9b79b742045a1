//! Log-barrier Newton method for `min_σ S(ρ‖σ)` over two-qubit PPT states.
//!
//! σ is written in the Pauli basis, `σ = (I + Σ x_k P_k) / 4`, so the trace is
//! fixed and `σ^Γ` is the same expansion with the `σ_y`-on-B coordinates
//! negated. For a barrier weight `t` the method minimizes
//! `S(ρ‖σ) - t (ln det σ + ln det σ^Γ)` by damped Newton steps, then shrinks
//! `t`. Both terms are convex, and the suboptimality of the final iterate is
//! at most `8 t`.

use nalgebra::{DMatrix, DVector};

use crate::linalg::{self, c, CMatrix};

const DIM: usize = 15;
const BARRIER_ORDER: f64 = 8.0;

pub(crate) struct BarrierRun {
    pub value: f64,
    pub sigma: CMatrix,
    pub iterations: usize,
    pub converged: bool,
}

fn paulis() -> [CMatrix; 4] {
    let z = c(0.0);
    let o = c(1.0);
    let i = num_complex::Complex64::new(0.0, 1.0);
    [
        CMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        CMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        CMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        CMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    ]
}

struct Basis {
    /// `P_k / 4`.
    ops: Vec<CMatrix>,
    /// `+1`, or `-1` where the B factor is `σ_y` (sign under partial transpose on B).
    signs: Vec<f64>,
}

impl Basis {
    fn new() -> Self {
        let p = paulis();
        let mut ops = Vec::with_capacity(DIM);
        let mut signs = Vec::with_capacity(DIM);
        for a in 0..4 {
            for b in 0..4 {
                if a == 0 && b == 0 {
                    continue;
                }
                ops.push(linalg::kron(&p[a], &p[b]).scale(0.25));
                signs.push(if b == 2 { -1.0 } else { 1.0 });
            }
        }
        Basis { ops, signs }
    }

    fn state(&self, x: &[f64], transposed: bool) -> CMatrix {
        let mut m = CMatrix::identity(4, 4).scale(0.25);
        for (k, op) in self.ops.iter().enumerate() {
            let s = if transposed { self.signs[k] } else { 1.0 };
            m += op.scale(s * x[k]);
        }
        m
    }

    fn coordinates(&self, sigma: &CMatrix) -> Vec<f64> {
        // Tr(P_k P_l) = 4 δ_kl, and ops hold P_k / 4.
        self.ops.iter().map(|op| 4.0 * (op * sigma).trace().re).collect()
    }
}

/// `(ln a - ln b) / (a - b)`, stable for close arguments.
fn log_dd1(a: f64, b: f64) -> f64 {
    let u = (a - b) / (a + b);
    let ratio = if u.abs() < 1e-4 { 1.0 + u * u / 3.0 + u.powi(4) / 5.0 } else { u.atanh() / u };
    2.0 / (a + b) * ratio
}

/// Second divided difference of `ln`.
fn log_dd2(a: f64, b: f64, c: f64) -> f64 {
    let (hi, lo) = (a.max(b).max(c), a.min(b).min(c));
    if hi - lo <= 1e-5 * hi {
        let m = (a + b + c) / 3.0;
        return -0.5 / (m * m);
    }
    let mid = a + b + c - hi - lo;
    (log_dd1(hi, mid) - log_dd1(mid, lo)) / (hi - lo)
}

struct Local {
    value: f64,
    grad: DVector<f64>,
    hess: DMatrix<f64>,
}

pub(crate) struct Barrier {
    basis: Basis,
    rho: CMatrix,
    entropy: f64,
}

impl Barrier {
    pub fn new(rho: &CMatrix, entropy: f64) -> Self {
        Barrier { basis: Basis::new(), rho: rho.clone(), entropy }
    }

    /// `S(ρ‖σ)` in bits, or `None` when σ is not positive definite.
    fn relative_entropy(&self, values: &[f64], vectors: &CMatrix) -> Option<f64> {
        if values[values.len() - 1] <= 0.0 {
            return None;
        }
        let rotated = vectors.adjoint() * &self.rho * vectors;
        let cross: f64 = values.iter().enumerate().map(|(k, &s)| rotated[(k, k)].re * s.log2()).sum();
        Some(-self.entropy - cross)
    }

    fn barrier_value(&self, x: &[f64], t: f64) -> Option<f64> {
        let (sv, svec) = linalg::eigh(&self.basis.state(x, false));
        let (gv, _) = linalg::eigh(&self.basis.state(x, true));
        if gv[3] <= 0.0 {
            return None;
        }
        let f = self.relative_entropy(&sv, &svec)?;
        let logdet: f64 = sv.iter().chain(gv.iter()).map(|v| v.ln()).sum();
        Some(f - t * logdet)
    }

    fn local(&self, x: &[f64], t: f64) -> Option<Local> {
        let ops = &self.basis.ops;
        let sigma = self.basis.state(x, false);
        let (sv, svec) = linalg::eigh(&sigma);
        let f = self.relative_entropy(&sv, &svec)?;
        let gamma = self.basis.state(x, true);
        let (gv, gvec) = linalg::eigh(&gamma);
        if gv[3] <= 0.0 {
            return None;
        }
        let logdet: f64 = sv.iter().chain(gv.iter()).map(|v| v.ln()).sum();

        let rho_e = svec.adjoint() * &self.rho * &svec;
        let a_e: Vec<CMatrix> = ops.iter().map(|op| svec.adjoint() * op * &svec).collect();
        let inv = linalg::reconstruct(&sv.iter().map(|v| 1.0 / v).collect::<Vec<_>>(), &svec);
        let ginv = linalg::reconstruct(&gv.iter().map(|v| 1.0 / v).collect::<Vec<_>>(), &gvec);
        let inv_ops: Vec<CMatrix> = ops.iter().map(|op| &inv * op).collect();
        let ginv_ops: Vec<CMatrix> =
            ops.iter().zip(&self.basis.signs).map(|(op, &s)| (&ginv * op).scale(s)).collect();

        let n = sv.len();
        let mut d1 = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                d1[(i, j)] = log_dd1(sv[i], sv[j]);
            }
        }
        let mut d2 = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for m in 0..n {
                    d2[(i * n + j) * n + m] = log_dd2(sv[i], sv[j], sv[m]);
                }
            }
        }

        let ln2 = std::f64::consts::LN_2;
        let mut grad = DVector::<f64>::zeros(DIM);
        for k in 0..DIM {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    s += (a_e[k][(i, j)] * rho_e[(j, i)]).re * d1[(i, j)];
                }
            }
            grad[k] = -s / ln2 - t * (inv_ops[k].trace().re + ginv_ops[k].trace().re);
        }

        let mut hess = DMatrix::<f64>::zeros(DIM, DIM);
        for k in 0..DIM {
            for l in k..DIM {
                let (a, b) = (&a_e[k], &a_e[l]);
                let mut s = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        for m in 0..n {
                            let w = d2[(i * n + j) * n + m];
                            s += w * ((a[(i, j)] * b[(j, m)] + b[(i, j)] * a[(j, m)]) * rho_e[(m, i)]).re;
                        }
                    }
                }
                let barrier = (&inv_ops[k] * &inv_ops[l]).trace().re + (&ginv_ops[k] * &ginv_ops[l]).trace().re;
                let h = -s / ln2 + t * barrier;
                hess[(k, l)] = h;
                hess[(l, k)] = h;
            }
        }
        Some(Local { value: f - t * logdet, grad, hess })
    }

    fn newton_direction(local: &Local) -> DVector<f64> {
        let mut shift = 0.0;
        loop {
            let mut h = local.hess.clone();
            for k in 0..DIM {
                h[(k, k)] += shift;
            }
            if let Some(ch) = h.cholesky() {
                return -ch.solve(&local.grad);
            }
            shift = if shift == 0.0 { 1e-12 * local.hess.diagonal().amax().max(1.0) } else { shift * 10.0 };
        }
    }

    /// Runs the barrier path from `start` (which must be strictly feasible) down to
    /// a suboptimality bound of `gap` bits.
    pub fn solve(&self, start: &CMatrix, gap: f64, max_newton: usize) -> BarrierRun {
        let mut x = self.basis.coordinates(start);
        let t_final = gap / BARRIER_ORDER;
        let mut t = 1.0_f64.max(t_final);
        let mut iterations = 0;
        let mut converged = false;
        'outer: loop {
            let mut centered = false;
            while iterations < max_newton {
                let Some(local) = self.local(&x, t) else { break 'outer };
                iterations += 1;
                let dir = Self::newton_direction(&local);
                let decrement = -local.grad.dot(&dir);
                if decrement / 2.0 <= 1e-11 {
                    centered = true;
                    break;
                }
                let mut step = 1.0;
                let mut moved = false;
                for _ in 0..60 {
                    let trial: Vec<f64> = x.iter().zip(dir.iter()).map(|(a, d)| a + step * d).collect();
                    if let Some(v) = self.barrier_value(&trial, t) {
                        if v <= local.value - 0.25 * step * decrement {
                            x = trial;
                            moved = true;
                            break;
                        }
                    }
                    step *= 0.5;
                }
                if !moved {
                    centered = decrement < 1e-8;
                    break;
                }
            }
            if t <= t_final {
                converged = centered;
                break;
            }
            if iterations >= max_newton {
                break;
            }
            t = (t / 10.0).max(t_final);
        }
        let sigma = self.basis.state(&x, false);
        let (sv, svec) = linalg::eigh(&sigma);
        let value = self.relative_entropy(&sv, &svec).unwrap_or(f64::INFINITY);
        BarrierRun { value, sigma, iterations, converged }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::measures::von_neumann_entropy;
    use crate::random;
    use crate::state::{partial_transpose_matrix, Dims, Subsystem};

    #[test]
    fn coordinates_roundtrip_and_transpose_signs() {
        let basis = Basis::new();
        let rho = random::random_density(Dims::qubits(), 4, 1).unwrap();
        let x = basis.coordinates(rho.matrix());
        assert!(linalg::max_abs_diff(&basis.state(&x, false), rho.matrix()) < 1e-14);
        let pt = partial_transpose_matrix(rho.matrix(), Dims::qubits(), Subsystem::B);
        assert!(linalg::max_abs_diff(&basis.state(&x, true), &pt) < 1e-14);
    }

    #[test]
    fn divided_differences() {
        assert!((log_dd1(2.0, 2.0) - 0.5).abs() < 1e-15);
        assert!((log_dd1(3.0, 1.0) - 3.0_f64.ln() / 2.0).abs() < 1e-15);
        assert!((log_dd2(2.0, 2.0, 2.0) + 0.125).abs() < 1e-12);
        let want = (log_dd1(4.0, 2.0) - log_dd1(2.0, 1.0)) / 3.0;
        assert!((log_dd2(1.0, 4.0, 2.0) - want).abs() < 1e-15);
        let near = log_dd2(1.0, 1.0 + 1e-7, 1.0 + 2e-7);
        assert!((near + 0.5 / (1.0 + 1e-7_f64).powi(2)).abs() < 1e-9);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let rho = random::random_density(Dims::qubits(), 3, 5).unwrap();
        let b = Barrier::new(rho.matrix(), von_neumann_entropy(&rho));
        let sigma = random::random_density(Dims::qubits(), 4, 6).unwrap();
        let sigma = sigma.matrix() * c(0.5) + CMatrix::identity(4, 4) * c(0.125);
        let x = b.basis.coordinates(&sigma);
        let t = 0.3;
        let local = b.local(&x, t).unwrap();
        let h = 1e-6;
        for k in 0..DIM {
            let mut plus = x.clone();
            let mut minus = x.clone();
            plus[k] += h;
            minus[k] -= h;
            let fd = (b.barrier_value(&plus, t).unwrap() - b.barrier_value(&minus, t).unwrap()) / (2.0 * h);
            assert!((fd - local.grad[k]).abs() < 1e-6, "grad {k}: {fd} vs {}", local.grad[k]);
            let gp = b.local(&plus, t).unwrap().grad;
            let gm = b.local(&minus, t).unwrap().grad;
            for l in 0..DIM {
                let fd2 = (gp[l] - gm[l]) / (2.0 * h);
                assert!((fd2 - local.hess[(l, k)]).abs() < 1e-5, "hess {l},{k}: {fd2} vs {}", local.hess[(l, k)]);
            }
        }
    }

    #[test]
    fn werner_reaches_closed_form() {
        let rho = families::werner(0.8).unwrap();
        let b = Barrier::new(rho.matrix(), von_neumann_entropy(&rho));
        let run = b.solve(&CMatrix::identity(4, 4).scale(0.25), 1e-7, 500);
        let want = 1.0 - crate::measures::binary_entropy(0.8).unwrap();
        assert!(run.converged);
        assert!(run.value >= want - 1e-9 && run.value - want < 1e-6, "{} vs {want}", run.value);
    }
}
