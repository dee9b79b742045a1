//! Bipartite states and the block operations on them.
//!
//! Basis convention: `|i⟩_A |j⟩_B` sits at flat index `i * dB + j`. Every block
//! operation in the crate (partial trace, partial transpose, tensor grouping,
//! reductions) relies on it.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::linalg::{self, c, CMatrix, CVector, ZERO};

/// Default cap on `dA * dB`.
pub const DEFAULT_MAX_TOTAL_DIM: usize = 64;
/// Tolerance for the Hermitian, trace and PSD checks on density matrices.
pub const DENSITY_TOL: f64 = 1e-10;
/// Tolerance on the Euclidean norm of pure states.
pub const NORM_TOL: f64 = 1e-12;

/// Local dimensions of the two parties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dims {
    pub a: usize,
    pub b: usize,
}

impl Dims {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        Self::with_max(a, b, DEFAULT_MAX_TOTAL_DIM)
    }

    pub fn with_max(a: usize, b: usize, max_total: usize) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(param(format!("dimensions must be positive, got ({a}, {b})")));
        }
        let total = a
            .checked_mul(b)
            .ok_or(Error::Size { requested: usize::MAX, max: max_total })?;
        if total > max_total {
            return Err(Error::Size { requested: total, max: max_total });
        }
        Ok(Dims { a, b })
    }

    pub const fn qubits() -> Self {
        Dims { a: 2, b: 2 }
    }

    pub fn total(&self) -> usize {
        self.a * self.b
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.b + j
    }

    pub fn of(&self, s: Subsystem) -> usize {
        match s {
            Subsystem::A => self.a,
            Subsystem::B => self.b,
        }
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.a, self.b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

impl Subsystem {
    pub fn other(self) -> Self {
        match self {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        }
    }
}

impl fmt::Display for Subsystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subsystem::A => f.write_str("A"),
            Subsystem::B => f.write_str("B"),
        }
    }
}

/// A normalized vector over `C^dA ⊗ C^dB`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
    dims: Dims,
}

impl PureState {
    /// Accepts amplitudes that are already unit norm within [`NORM_TOL`].
    pub fn new(amplitudes: CVector, dims: Dims) -> Result<Self> {
        check_len(amplitudes.len(), dims)?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(PureState { amplitudes, dims })
    }

    /// Rescales any nonzero vector to unit norm.
    pub fn normalized(amplitudes: CVector, dims: Dims) -> Result<Self> {
        check_len(amplitudes.len(), dims)?;
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(param("cannot normalize a zero or non-finite vector"));
        }
        Ok(PureState { amplitudes: amplitudes.unscale(norm), dims })
    }

    /// `|i⟩_A |j⟩_B`.
    pub fn basis(i: usize, j: usize, dims: Dims) -> Result<Self> {
        if i >= dims.a || j >= dims.b {
            return Err(param(format!("basis index ({i}, {j}) out of range for {dims}")));
        }
        let mut v = CVector::zeros(dims.total());
        v[dims.index(i, j)] = c(1.0);
        Ok(PureState { amplitudes: v, dims })
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    /// Amplitudes reshaped to a `dA x dB` matrix `M[i, j] = ψ[i * dB + j]`.
    pub fn coefficient_matrix(&self) -> CMatrix {
        CMatrix::from_fn(self.dims.a, self.dims.b, |i, j| {
            self.amplitudes[self.dims.index(i, j)]
        })
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix {
            m: &self.amplitudes * self.amplitudes.adjoint(),
            dims: self.dims,
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> num_complex::Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }
}

fn check_len(len: usize, dims: Dims) -> Result<()> {
    if len != dims.total() {
        return Err(Error::Dimension(format!(
            "vector of length {len} does not match dims {dims}"
        )));
    }
    Ok(())
}

/// Trace-one positive semidefinite Hermitian matrix tagged with its bipartite split.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix,
    dims: Dims,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity, all at [`DENSITY_TOL`].
    pub fn new(m: CMatrix, dims: Dims) -> Result<Self> {
        check_square(&m, dims)?;
        let dev = linalg::hermitian_deviation(&m);
        if dev > DENSITY_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = linalg::trace(&m);
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(Error::InvalidTrace(tr.re));
        }
        let min = linalg::eigh(&m).0.last().copied().unwrap_or(0.0);
        if min < -DENSITY_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(DensityMatrix { m, dims })
    }

    /// Like [`DensityMatrix::new`] but repairs small defects: the matrix is
    /// symmetrized, eigenvalues in `[-DENSITY_TOL, 0)` are clipped to zero and
    /// the trace is rescaled to one. More negative eigenvalues are still rejected.
    pub fn renormalized(m: CMatrix, dims: Dims) -> Result<Self> {
        check_square(&m, dims)?;
        let dev = linalg::hermitian_deviation(&m);
        if dev > DENSITY_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let (values, vectors) = linalg::eigh(&linalg::hermitian_part(&m));
        let min = values.last().copied().unwrap_or(0.0);
        if min < -DENSITY_TOL {
            return Err(Error::NotPositive(min));
        }
        let tr: f64 = values.iter().map(|v| v.max(0.0)).sum();
        if !(tr > 0.0) {
            return Err(Error::InvalidTrace(tr));
        }
        let m = linalg::from_spectrum(&values, &vectors, |v| v.max(0.0) / tr);
        Ok(DensityMatrix { m: linalg::hermitian_part(&m), dims })
    }

    pub(crate) fn from_raw(m: CMatrix, dims: Dims) -> Self {
        debug_assert_eq!(m.nrows(), dims.total());
        DensityMatrix { m, dims }
    }

    pub fn maximally_mixed(dims: Dims) -> Self {
        let n = dims.total();
        DensityMatrix {
            m: CMatrix::identity(n, n).unscale(n as f64),
            dims,
        }
    }

    /// Convex mixture `Σ w_k ρ_k`; weights must be nonnegative and sum to one.
    pub fn mixture(terms: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = terms.first().ok_or_else(|| param("empty mixture"))?;
        let dims = first.1.dims;
        let mut total = 0.0;
        let mut m = CMatrix::zeros(dims.total(), dims.total());
        for (w, rho) in terms {
            if *w < 0.0 {
                return Err(param(format!("negative mixture weight {w}")));
            }
            if rho.dims != dims {
                return Err(Error::Dimension(format!("mixing {} with {}", dims, rho.dims)));
            }
            total += w;
            m += rho.m.scale(*w);
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(param(format!("mixture weights sum to {total}")));
        }
        Ok(DensityMatrix { m, dims })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigh(&self.m).0
    }

    pub fn purity(&self) -> f64 {
        (&self.m * &self.m).trace().re
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, psi: &PureState) -> f64 {
        (psi.amplitudes().adjoint() * &self.m * psi.amplitudes())[(0, 0)].re
    }

    /// Same matrix with a different bipartite split of the same total dimension.
    pub fn with_dims(&self, dims: Dims) -> Result<Self> {
        check_square(&self.m, dims)?;
        Ok(DensityMatrix { m: self.m.clone(), dims })
    }
}

fn check_square(m: &CMatrix, dims: Dims) -> Result<()> {
    if !m.is_square() || m.nrows() != dims.total() {
        return Err(Error::Dimension(format!(
            "{}x{} matrix does not match dims {}",
            m.nrows(),
            m.ncols(),
            dims
        )));
    }
    Ok(())
}

/// Weighted list of pure states realizing a mixed state.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    members: Vec<(f64, PureState)>,
    dims: Dims,
}

impl Ensemble {
    pub fn new(members: Vec<(f64, PureState)>) -> Result<Self> {
        let dims = members
            .first()
            .map(|(_, s)| s.dims())
            .ok_or_else(|| param("empty ensemble"))?;
        let mut total = 0.0;
        for (w, s) in &members {
            if *w < 0.0 || !w.is_finite() {
                return Err(param(format!("invalid ensemble weight {w}")));
            }
            if s.dims() != dims {
                return Err(Error::Dimension(format!(
                    "ensemble member dims {} differ from {}",
                    s.dims(),
                    dims
                )));
            }
            total += w;
        }
        if (total - 1.0).abs() > NORM_TOL {
            return Err(param(format!("ensemble weights sum to {total}")));
        }
        Ok(Ensemble { members, dims })
    }

    /// Uniform weights over the given states.
    pub fn uniform(states: Vec<PureState>) -> Result<Self> {
        let w = 1.0 / states.len().max(1) as f64;
        Self::new(states.into_iter().map(|s| (w, s)).collect())
    }

    pub fn members(&self) -> &[(f64, PureState)] {
        &self.members
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn to_density(&self) -> DensityMatrix {
        let n = self.dims.total();
        let mut m = CMatrix::zeros(n, n);
        for (w, s) in &self.members {
            m += (s.amplitudes() * s.amplitudes().adjoint()).scale(*w);
        }
        DensityMatrix::from_raw(m, self.dims)
    }
}

/// Tensor product with the default dimension cap.
///
/// The result is regrouped as a two-party state: the A parts of both inputs
/// form the new A, the B parts form the new B.
pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    tensor_with_max(a, b, DEFAULT_MAX_TOTAL_DIM)
}

pub fn tensor_with_max(
    a: &DensityMatrix,
    b: &DensityMatrix,
    max_total: usize,
) -> Result<DensityMatrix> {
    let (da, db) = (a.dims, b.dims);
    let dims = Dims::with_max(da.a * db.a, da.b * db.b, max_total)?;
    let n = dims.total();
    // new index for (i1, i2 | j1, j2) = (i1 * db.a + i2) * dims.b + (j1 * db.b + j2)
    let regroup = |i1: usize, j1: usize, i2: usize, j2: usize| {
        dims.index(i1 * db.a + i2, j1 * db.b + j2)
    };
    let mut m = CMatrix::zeros(n, n);
    for i1 in 0..da.a {
        for j1 in 0..da.b {
            for k1 in 0..da.a {
                for l1 in 0..da.b {
                    let x = a.m[(da.index(i1, j1), da.index(k1, l1))];
                    if x == ZERO {
                        continue;
                    }
                    for i2 in 0..db.a {
                        for j2 in 0..db.b {
                            for k2 in 0..db.a {
                                for l2 in 0..db.b {
                                    let y = b.m[(db.index(i2, j2), db.index(k2, l2))];
                                    m[(regroup(i1, j1, i2, j2), regroup(k1, l1, k2, l2))] = x * y;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(DensityMatrix { m, dims })
}

/// Traces out `over`; the result is tagged `(d_remaining, 1)`.
pub fn partial_trace(rho: &DensityMatrix, over: Subsystem) -> DensityMatrix {
    let d = rho.dims;
    let keep = d.of(over.other());
    let mut m = CMatrix::zeros(keep, keep);
    for x in 0..keep {
        for y in 0..keep {
            let mut s = ZERO;
            match over {
                Subsystem::B => {
                    for j in 0..d.b {
                        s += rho.m[(d.index(x, j), d.index(y, j))];
                    }
                }
                Subsystem::A => {
                    for i in 0..d.a {
                        s += rho.m[(d.index(i, x), d.index(i, y))];
                    }
                }
            }
            m[(x, y)] = s;
        }
    }
    DensityMatrix { m, dims: Dims { a: keep, b: 1 } }
}

/// Partial transpose of a density matrix. The result is Hermitian with unit
/// trace but need not be positive.
pub fn partial_transpose(rho: &DensityMatrix, on: Subsystem) -> CMatrix {
    partial_transpose_matrix(&rho.m, rho.dims, on)
}

/// Partial transpose of an arbitrary `dA*dB` square matrix. This is a pure
/// index permutation, so applying it twice is exact.
pub fn partial_transpose_matrix(m: &CMatrix, dims: Dims, on: Subsystem) -> CMatrix {
    let n = dims.total();
    assert_eq!(m.nrows(), n, "matrix does not match dims");
    CMatrix::from_fn(n, n, |r, s| {
        let (i, j) = (r / dims.b, r % dims.b);
        let (k, l) = (s / dims.b, s % dims.b);
        match on {
            Subsystem::B => m[(dims.index(i, l), dims.index(k, j))],
            Subsystem::A => m[(dims.index(k, j), dims.index(i, l))],
        }
    })
}

pub use crate::linalg::eigenvalues_hermitian;
