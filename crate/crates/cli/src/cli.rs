use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "qent", version, about = "Entanglement measures, twirling and max-entropy searches for small bipartite states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Report entropy, concurrence, entanglement of formation, coherent-information
    /// bounds, PPT and (optionally) relative entropy of entanglement for one state.
    Measure(MeasureArgs),
    /// Twirl a state onto the isotropic (Werner for qubits) family and report the
    /// fidelity and entanglement before and after.
    Twirl(TwirlArgs),
    /// Check an ensemble file for local orthogonality and, if it holds, report
    /// the ensemble's entanglement of formation (equal to distillable and total entanglement).
    EnsembleCheck(EnsembleArgs),
    /// Werner-family table of entropy, hashing yield, 1-H(F), E_f and the temperature proxy.
    ///
    /// TSV columns: F, entropy_bits, hashing_bits, rains_bits, eof_bits, temperature_proxy.
    ThermoTable(ThermoArgs),
    /// Maximum-entropy two-qubit states at fixed concurrence, compared with the
    /// rho_p and Werner families.
    ///
    /// TSV columns: c, s_best, s_rho_p, s_werner, residual, converged, origin, restart.
    MaxentSweep(MaxentArgs),
    /// Entanglement of formation of a|00> + b|11> before and after twirling.
    ///
    /// TSV columns: a, b, F, e_pure, e_twirled, abs_diff, preserved.
    PreservationDemo(PreservationArgs),
    /// Maximally entangled M-level states embedded in N x N: the twirled isotropic
    /// state's E_f upper bound versus log2 M.
    ///
    /// TSV columns: N, M, F, e_pure, twirled_upper_bound, gap.
    CounterexampleDemo(CounterexampleArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct StateInput {
    /// Named state, `family:p1,p2,...`. Families: bell:<psi+|psi-|phi+|phi->,
    /// werner:F, isotropic:N,F, schmidt:a,b, rho_p:p, psi_m:N,M, max_entangled:N,
    /// product_basis:i,j[,dA,dB].
    #[arg(long)]
    pub state: Option<String>,
    /// Density matrix in QMX format.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct Common {
    /// Print JSON instead of a human-readable table.
    #[arg(long)]
    pub json: bool,
    /// Seed for randomized solvers.
    #[arg(long, env = "QENT_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct MeasureArgs {
    #[command(flatten)]
    pub input: StateInput,
    /// Also compute the relative entropy of entanglement (two qubits only).
    #[arg(long = "e-r")]
    pub e_r: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct TwirlArgs {
    #[command(flatten)]
    pub input: StateInput,
    /// Write the twirled state to this QMX file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct EnsembleArgs {
    /// Ensemble file (`dims d1 d2 ...` header, then `p | re,im ...` lines).
    #[arg(long)]
    pub file: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ThermoArgs {
    /// Comma-separated fidelities; overrides --from/--to/--step.
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.5)]
    pub from: f64,
    #[arg(long, default_value_t = 1.0)]
    pub to: f64,
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct MaxentArgs {
    /// Comma-separated concurrence values in [0, 1].
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")]
    pub grid: Vec<f64>,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    /// Tolerance on |C(rho) - c|.
    #[arg(long, default_value_t = 1e-5)]
    pub tol: f64,
    /// Simplex evaluation budget per penalty stage.
    #[arg(long, default_value_t = 4000)]
    pub max_evals: usize,
    /// Write each best state as `c_<value>.qmx` into this directory.
    #[arg(long)]
    pub qmx_dir: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct PreservationArgs {
    /// Schmidt coefficient(s) a; b = sqrt(1 - a^2). Defaults to a grid over [1/sqrt2, 1].
    #[arg(long, value_delimiter = ',')]
    pub a: Option<Vec<f64>>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct CounterexampleArgs {
    /// Local dimension N (requires --m); defaults to a fixed set of (N, M) pairs.
    #[arg(long, requires = "m")]
    pub n: Option<usize>,
    /// Number of Schmidt terms M <= N.
    #[arg(long, requires = "n")]
    pub m: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}
