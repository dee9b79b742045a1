//! Local orthogonality of pure states and ensembles.
//!
//! Two states are locally orthogonal on subsystem `l` when their single-party
//! reductions there have zero overlap, `Tr(ρ_l^ψ ρ_l^φ) = 0`. An ensemble is
//! locally orthogonal when it can be ordered so that every member is
//! orthogonal, on one subsystem of its own choosing, to every member after it.
//! The witness subsystem may differ between members.
//!
//! A mixture of a locally orthogonal ensemble can be split into its members
//! by local measurements without disturbing them, so its entanglement of
//! formation is the plain average of the member entanglements, and that value
//! is also its distillable and total entanglement.

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::linalg::{CMatrix, CVector, ZERO};
use crate::measures::pure_entanglement;
use crate::state::{Dims, Ensemble, PureState};

/// Reductions with overlap below this are orthogonal.
pub const ORTHO_TOL: f64 = 1e-10;
/// Looser threshold used when re-verifying a certificate.
pub const VERIFY_TOL: f64 = 1e-9;
/// Largest ensemble the ordering search accepts.
pub const SEARCH_CAP: usize = 12;

/// Local dimensions of an `m`-party system.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiDims(Vec<usize>);

impl MultiDims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(param(format!("invalid subsystem dimensions {dims:?}")));
        }
        Ok(MultiDims(dims))
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn parties(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn label(&self, l: usize) -> String {
        if self.0.len() <= 26 {
            char::from(b'A' + l as u8).to_string()
        } else {
            l.to_string()
        }
    }
}

impl From<Dims> for MultiDims {
    fn from(d: Dims) -> Self {
        MultiDims(vec![d.a, d.b])
    }
}

/// Weighted pure states over a [`MultiDims`] space.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiEnsemble {
    dims: MultiDims,
    members: Vec<(f64, CVector)>,
}

impl MultiEnsemble {
    /// Members are rescaled to unit norm; weights must be nonnegative and sum to one.
    pub fn new(dims: MultiDims, members: Vec<(f64, CVector)>) -> Result<Self> {
        if members.is_empty() {
            return Err(param("empty ensemble"));
        }
        let mut total = 0.0;
        let mut normalized = Vec::with_capacity(members.len());
        for (w, v) in members {
            if w < 0.0 || !w.is_finite() {
                return Err(param(format!("invalid ensemble weight {w}")));
            }
            if v.len() != dims.total() {
                return Err(Error::Dimension(format!(
                    "member of length {} for dims {:?}",
                    v.len(),
                    dims.as_slice()
                )));
            }
            let norm = v.norm();
            if norm == 0.0 || !norm.is_finite() {
                return Err(param("zero or non-finite ensemble member"));
            }
            total += w;
            normalized.push((w, v.unscale(norm)));
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(param(format!("ensemble weights sum to {total}")));
        }
        Ok(MultiEnsemble { dims, members: normalized })
    }

    pub fn dims(&self) -> &MultiDims {
        &self.dims
    }

    pub fn members(&self) -> &[(f64, CVector)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The same ensemble as a bipartite [`Ensemble`]; requires exactly two parties.
    pub fn to_bipartite(&self) -> Result<Ensemble> {
        let dims = self.bipartite_dims()?;
        let members = self
            .members
            .iter()
            .map(|(w, v)| PureState::normalized(v.clone(), dims).map(|s| (*w, s)))
            .collect::<Result<Vec<_>>>()?;
        Ensemble::new(members)
    }

    fn bipartite_dims(&self) -> Result<Dims> {
        match self.dims.as_slice() {
            &[a, b] => Dims::new(a, b),
            other => Err(Error::Dimension(format!("expected two parties, got {}", other.len()))),
        }
    }
}

impl From<&Ensemble> for MultiEnsemble {
    fn from(e: &Ensemble) -> Self {
        MultiEnsemble {
            dims: e.dims().into(),
            members: e.members().iter().map(|(w, s)| (*w, s.amplitudes().clone())).collect(),
        }
    }
}

/// Reduced density matrix of subsystem `l`.
pub fn reduced_density(psi: &CVector, dims: &MultiDims, l: usize) -> Result<CMatrix> {
    if l >= dims.parties() {
        return Err(param(format!("subsystem {l} out of range for {} parties", dims.parties())));
    }
    if psi.len() != dims.total() {
        return Err(Error::Dimension(format!("state of length {} for dims {:?}", psi.len(), dims.as_slice())));
    }
    let d = dims.as_slice();
    let left: usize = d[..l].iter().product();
    let right: usize = d[l + 1..].iter().product();
    let dl = d[l];
    let mut rho = CMatrix::zeros(dl, dl);
    for i in 0..dl {
        for k in 0..dl {
            let mut s = ZERO;
            for a in 0..left {
                for b in 0..right {
                    s += psi[(a * dl + i) * right + b] * psi[(a * dl + k) * right + b].conj();
                }
            }
            rho[(i, k)] = s;
        }
    }
    Ok(rho)
}

/// `Tr(ρ_l^ψ ρ_l^φ)`.
pub fn reduction_overlap(psi: &CVector, phi: &CVector, dims: &MultiDims, l: usize) -> Result<f64> {
    let a = reduced_density(psi, dims, l)?;
    let b = reduced_density(phi, dims, l)?;
    Ok((a * b).trace().re.max(0.0))
}

/// Holds when at least `k` subsystems carry orthogonal reductions; the second
/// value lists every such subsystem.
pub fn k_locally_orthogonal(psi: &CVector, phi: &CVector, dims: &MultiDims, k: usize) -> Result<(bool, Vec<usize>)> {
    if k < 1 || k > dims.parties() {
        return Err(param(format!("k = {k} must be in 1..={}", dims.parties())));
    }
    let mut witnesses = Vec::new();
    for l in 0..dims.parties() {
        if reduction_overlap(psi, phi, dims, l)? < ORTHO_TOL {
            witnesses.push(l);
        }
    }
    Ok((witnesses.len() >= k, witnesses))
}

/// An ordering of ensemble members plus, for every member except the last, a
/// subsystem on which it is orthogonal to all later members.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LOCertificate {
    /// Zero-based member indices in certified order.
    pub ordering: Vec<usize>,
    /// Witness subsystem per ordered position; `None` for the last member.
    pub witnesses: Vec<Option<usize>>,
}

impl LOCertificate {
    /// Recomputes every claimed overlap from scratch.
    pub fn verify(&self, e: &MultiEnsemble) -> bool {
        let n = e.len();
        let mut seen = vec![false; n];
        if self.ordering.len() != n || self.witnesses.len() != n {
            return false;
        }
        for &i in &self.ordering {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return false;
            }
        }
        for (pos, &i) in self.ordering.iter().enumerate() {
            let later = &self.ordering[pos + 1..];
            match self.witnesses[pos] {
                None if later.is_empty() => {}
                None => return false,
                Some(l) => {
                    for &j in later {
                        match reduction_overlap(&e.members[i].1, &e.members[j].1, &e.dims, l) {
                            Ok(v) if v < VERIFY_TOL => {}
                            _ => return false,
                        }
                    }
                }
            }
        }
        true
    }
}

/// Searches for a local-orthogonality ordering.
///
/// Depth-first search over orderings with a precomputed overlap table. Any
/// member that is orthogonal to all remaining members may be placed next
/// without losing solutions (dropping a member only relaxes the constraints on
/// the others), so the search never has to undo a placement; the first
/// candidate in index order is taken, with the lowest-index witness.
pub fn ensemble_locally_orthogonal(e: &MultiEnsemble) -> Result<Option<LOCertificate>> {
    let n = e.len();
    if n > SEARCH_CAP {
        return Err(Error::Capacity { size: n, cap: SEARCH_CAP });
    }
    let parties = e.dims.parties();
    // orthogonal[l][i][j]
    let mut orthogonal = vec![vec![vec![false; n]; n]; parties];
    for l in 0..parties {
        let reductions = e
            .members
            .iter()
            .map(|(_, v)| reduced_density(v, &e.dims, l))
            .collect::<Result<Vec<_>>>()?;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    orthogonal[l][i][j] = (&reductions[i] * &reductions[j]).trace().re < ORTHO_TOL;
                }
            }
        }
    }
    let mut ordering = Vec::with_capacity(n);
    let mut witnesses = Vec::with_capacity(n);
    let mut remaining: Vec<usize> = (0..n).collect();
    if search(&orthogonal, &mut remaining, &mut ordering, &mut witnesses) {
        let cert = LOCertificate { ordering, witnesses };
        debug_assert!(cert.verify(e));
        Ok(Some(cert))
    } else {
        Ok(None)
    }
}

fn search(
    orthogonal: &[Vec<Vec<bool>>],
    remaining: &mut Vec<usize>,
    ordering: &mut Vec<usize>,
    witnesses: &mut Vec<Option<usize>>,
) -> bool {
    if remaining.len() <= 1 {
        ordering.append(remaining);
        witnesses.extend(ordering[witnesses.len()..].iter().map(|_| None));
        return true;
    }
    for pos in 0..remaining.len() {
        let i = remaining[pos];
        let witness = (0..orthogonal.len()).find(|&l| {
            remaining.iter().all(|&j| j == i || orthogonal[l][i][j])
        });
        if let Some(l) = witness {
            remaining.remove(pos);
            ordering.push(i);
            witnesses.push(Some(l));
            if search(orthogonal, remaining, ordering, witnesses) {
                return true;
            }
            witnesses.pop();
            ordering.pop();
            remaining.insert(pos, i);
        }
    }
    false
}

/// Entanglement of a locally orthogonal bipartite mixture.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoEntanglement {
    pub eof_bits: f64,
    /// Equal to `eof_bits` for locally orthogonal mixtures.
    pub distillable_bits: f64,
    /// Equal to `eof_bits` for locally orthogonal mixtures.
    pub total_bits: f64,
    pub certificate: LOCertificate,
}

/// `Σ p_i E(ψ_i)` for a locally orthogonal two-party ensemble.
pub fn lo_ensemble_eof(e: &MultiEnsemble) -> Result<LoEntanglement> {
    let bipartite = e.to_bipartite()?;
    let certificate = ensemble_locally_orthogonal(e)?
        .ok_or_else(|| Error::Precondition("ensemble is not locally orthogonal".into()))?;
    let eof: f64 = bipartite.members().iter().map(|(p, s)| p * pure_entanglement(s)).sum();
    Ok(LoEntanglement { eof_bits: eof, distillable_bits: eof, total_bits: eof, certificate })
}

/// The 5x5 example ensemble `{|00⟩+|11⟩, |21⟩+|32⟩, |30⟩+|43⟩}` with uniform weights.
pub fn five_by_five_example() -> MultiEnsemble {
    let dims = MultiDims::new(vec![5, 5]).expect("valid dims");
    let ket = |pairs: [(usize, usize); 2]| {
        let mut v = CVector::zeros(25);
        for (i, j) in pairs {
            v[i * 5 + j] = crate::linalg::c(1.0);
        }
        v
    };
    let members = vec![
        (1.0 / 3.0, ket([(0, 0), (1, 1)])),
        (1.0 / 3.0, ket([(2, 1), (3, 2)])),
        (1.0 / 3.0, ket([(3, 0), (4, 3)])),
    ];
    MultiEnsemble::new(dims, members).expect("valid ensemble")
}
