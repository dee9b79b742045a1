//! Seeded random states and unitaries.
//!
//! Streams come from `ChaCha8Rng::seed_from_u64`. Complex Gaussian entries draw
//! the real part first, then the imaginary part, each from a standard normal.
//! Pure states are normalized Gaussian vectors (Haar distributed); mixed states
//! are `L L† / Tr(L L†)` with `L` a `d x rank` Gaussian matrix; unitaries are
//! the phase-corrected `Q` factor of a Gaussian matrix.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{param, Result};
use crate::linalg::{CMatrix, CVector};
use crate::state::{DensityMatrix, Dims, PureState};
use num_complex::Complex64;

pub type StateRng = ChaCha8Rng;

pub fn rng(seed: u64) -> StateRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    // Row-major fill so the stream order does not depend on nalgebra's storage.
    let mut m = CMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = gaussian(rng);
        }
    }
    m
}

pub fn random_pure(dims: Dims, seed: u64) -> PureState {
    random_pure_with(dims, &mut rng(seed))
}

pub fn random_pure_with<R: Rng + ?Sized>(dims: Dims, rng: &mut R) -> PureState {
    let v = CVector::from_iterator(dims.total(), (0..dims.total()).map(|_| gaussian(rng)));
    PureState::normalized(v, dims).expect("gaussian vector is nonzero")
}

pub fn random_density(dims: Dims, rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_density_with(dims, rank, &mut rng(seed))
}

pub fn random_density_with<R: Rng + ?Sized>(dims: Dims, rank: usize, rng: &mut R) -> Result<DensityMatrix> {
    let n = dims.total();
    if rank == 0 || rank > n {
        return Err(param(format!("rank {rank} must be in 1..={n}")));
    }
    let l = gaussian_matrix(n, rank, rng);
    let m = &l * l.adjoint();
    let tr = m.trace().re;
    DensityMatrix::renormalized(m.unscale(tr), dims)
}

/// Haar-random `n x n` unitary.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = gaussian_matrix(n, n, rng);
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Mixture of `terms` random product pure states with Dirichlet-like weights.
pub fn random_separable_with<R: Rng + ?Sized>(dims: Dims, terms: usize, rng: &mut R) -> DensityMatrix {
    let n = dims.total();
    let mut m = CMatrix::zeros(n, n);
    let mut weights: Vec<f64> = (0..terms.max(1)).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    for w in weights {
        let a = random_pure_with(Dims { a: dims.a, b: 1 }, rng);
        let b = random_pure_with(Dims { a: dims.b, b: 1 }, rng);
        let v = a.amplitudes().kronecker(b.amplitudes());
        m += (&v * v.adjoint()).scale(w);
    }
    DensityMatrix::renormalized(m, dims).expect("mixture of projectors is a state")
}
