//! Shared inputs for the benchmarks in `benches/`.

use qent_core::random::random_density;
use qent_core::{DensityMatrix, Dims};

/// A fixed batch of random two-qubit states covering ranks 1 through 4.
pub fn qubit_states(count: usize) -> Vec<DensityMatrix> {
    (0..count as u64)
        .map(|seed| random_density(Dims::qubits(), 1 + (seed % 4) as usize, 7_000 + seed).expect("valid rank"))
        .collect()
}

/// A full-rank random state on `n x n`.
pub fn square_state(n: usize, seed: u64) -> DensityMatrix {
    let dims = Dims::new(n, n).expect("within size cap");
    random_density(dims, n * n, seed).expect("valid rank")
}
