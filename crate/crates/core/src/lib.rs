//! Entanglement measures and related constructions for small bipartite states.
//!
//! Modules:
//!
//! * [`state`], [`families`], [`random`], [`io`]: density matrices, pure states,
//!   ensembles, named state families, seeded sampling and the text file formats.
//! * [`measures`]: entropies, concurrence, entanglement of formation, the
//!   coherent-information lower bound, PPT test, relative entropy of entanglement.
//! * [`twirl`]: the `U ⊗ U*` twirl onto the isotropic/Werner family.
//! * [`localorth`]: local orthogonality of pure-state ensembles.
//! * [`thermo`]: total/free/bound entanglement proxies and the temperature proxy.
//! * [`maxent`]: maximum-entropy states at fixed concurrence.
//!
//! Logarithms are base 2 throughout. Basis index convention: `|i⟩_A|j⟩_B ↦ i·dB + j`.

pub mod error;
pub mod families;
pub mod io;
pub mod linalg;
pub mod localorth;
pub mod maxent;
pub mod measures;
pub mod random;
pub mod state;
pub mod thermo;
pub mod twirl;

pub use error::{Error, Result};
pub use families::{make_state, BellState, State, StateFamily};
pub use measures::{MeasureReport, RelEntMethod, RelEntOptions, RelEntResult};
pub use state::{DensityMatrix, Dims, Ensemble, PureState, Subsystem};
pub use num_complex::Complex64;
