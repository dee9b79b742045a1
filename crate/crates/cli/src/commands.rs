use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use qent_core::io::{parse_ensemble, parse_qmx, write_qmx};
use qent_core::localorth::{ensemble_locally_orthogonal, lo_ensemble_eof, LOCertificate, LoEntanglement};
use qent_core::maxent::{
    entropy_rho_p, entropy_werner, maxent_search, maxent_sweep, monotonicity_violations, MaxEntOptions, Origin,
};
use qent_core::measures::{eof_two_qubit, measure};
use qent_core::thermo::{locally_orthogonal_report, werner_row, ThermoReport, WernerRow};
use qent_core::twirl::{
    check_preservation, isotropic_eof_upper_bound, isotropic_params, psi_m_twirl_decrease, twirl_isotropic,
    Preservation, TwirlDecrease,
};
use qent_core::{make_state, DensityMatrix, Dims, RelEntOptions, StateFamily};

use crate::cli::*;

macro_rules! outln {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        writeln!(std::io::stdout().lock(), $($arg)*)?
    }};
}

/// What a successful command reports back to `main` for the exit code.
pub enum Status {
    Ok,
    NotConverged(String),
}

fn load_state(input: &StateInput) -> Result<DensityMatrix> {
    match (&input.state, &input.file) {
        (Some(spec), None) => {
            let family: StateFamily = spec.parse()?;
            Ok(make_state(&family)?.density())
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_qmx(&text).with_context(|| format!("in {}", path.display()))
        }
        _ => bail!("give exactly one of --state or --file"),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    outln!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn opt6(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.6}"))
}

fn dims_label(d: Dims) -> String {
    format!("{}x{}", d.a, d.b)
}

pub fn measure_cmd(args: &MeasureArgs) -> Result<Status> {
    let rho = load_state(&args.input)?;
    let e_r_opts = RelEntOptions { seed: args.common.seed, ..Default::default() };
    if args.e_r && rho.dims() != Dims::qubits() {
        bail!("--e-r is only available for two-qubit states");
    }
    let report = measure(&rho, args.e_r.then_some(&e_r_opts))?;
    if args.common.json {
        print_json(&report)?;
    } else {
        outln!("dims\t{}", dims_label(rho.dims()));
        outln!("entropy_bits\t{:.6}", report.entropy_bits);
        outln!("concurrence\t{}", opt6(report.concurrence));
        outln!("eof_bits\t{}", opt6(report.eof_bits));
        outln!("g_a_bits\t{:.6}", report.g_a_bits);
        outln!("g_b_bits\t{:.6}", report.g_b_bits);
        outln!("ppt\t{}", if report.ppt { "yes" } else { "no" });
        outln!("ppt_min_eig\t{:.6}", report.ppt_min_eig);
        if args.e_r {
            outln!("e_r_bits\t{}", opt6(report.e_r_bits));
        }
    }
    Ok(match report.e_r_converged {
        Some(false) => Status::NotConverged("relative entropy solver did not converge".into()),
        _ => Status::Ok,
    })
}

#[derive(Serialize)]
struct TwirlReport {
    n: usize,
    fidelity: f64,
    eof_before_bits: Option<f64>,
    eof_after_bits: Option<f64>,
    eof_after_upper_bits: f64,
    twirled_separable: bool,
}

pub fn twirl_cmd(args: &TwirlArgs) -> Result<Status> {
    let rho = load_state(&args.input)?;
    let params = isotropic_params(&rho)?;
    let twirled = twirl_isotropic(&rho)?;
    let qubits = rho.dims() == Dims::qubits();
    let bound = isotropic_eof_upper_bound(params.n, params.fidelity)?;
    let report = TwirlReport {
        n: params.n,
        fidelity: params.fidelity,
        eof_before_bits: if qubits { Some(eof_two_qubit(&rho)?) } else { None },
        eof_after_bits: if qubits { Some(eof_two_qubit(&twirled)?) } else { None },
        eof_after_upper_bits: bound.bits,
        twirled_separable: bound.separable,
    };
    if let Some(path) = &args.out {
        fs::write(path, write_qmx(&twirled)).with_context(|| format!("writing {}", path.display()))?;
    }
    if args.common.json {
        print_json(&report)?;
    } else {
        outln!("n\t{}", report.n);
        outln!("fidelity\t{:.6}", report.fidelity);
        outln!("eof_before_bits\t{}", opt6(report.eof_before_bits));
        outln!("eof_after_bits\t{}", opt6(report.eof_after_bits));
        outln!("eof_after_upper_bits\t{:.6}", report.eof_after_upper_bits);
        outln!("twirled_separable\t{}", if report.twirled_separable { "yes" } else { "no" });
    }
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct EnsembleReport {
    dims: Vec<usize>,
    members: usize,
    locally_orthogonal: bool,
    certificate: Option<LOCertificate>,
    entanglement: Option<LoEntanglement>,
    thermo: Option<ThermoReport>,
}

pub fn ensemble_check_cmd(args: &EnsembleArgs) -> Result<Status> {
    let path = &args.file;
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let ensemble = parse_ensemble(&text).with_context(|| format!("in {}", path.display()))?;
    let certificate = ensemble_locally_orthogonal(&ensemble)?;
    let bipartite = ensemble.dims().parties() == 2;
    let (entanglement, thermo) = match (&certificate, bipartite) {
        (Some(_), true) => (Some(lo_ensemble_eof(&ensemble)?), Some(locally_orthogonal_report(&ensemble)?)),
        _ => (None, None),
    };
    let report = EnsembleReport {
        dims: ensemble.dims().as_slice().to_vec(),
        members: ensemble.len(),
        locally_orthogonal: certificate.is_some(),
        certificate,
        entanglement,
        thermo,
    };
    if args.common.json {
        print_json(&report)?;
        return Ok(Status::Ok);
    }
    let dims: Vec<String> = report.dims.iter().map(|d| d.to_string()).collect();
    outln!("dims\t{}", dims.join("x"));
    outln!("members\t{}", report.members);
    let Some(cert) = &report.certificate else {
        outln!("locally_orthogonal\tno");
        return Ok(Status::Ok);
    };
    outln!("locally_orthogonal\tyes");
    let ordering: Vec<String> = cert.ordering.iter().map(|i| (i + 1).to_string()).collect();
    let witnesses: Vec<String> =
        cert.witnesses.iter().map(|w| w.map_or_else(|| "—".to_string(), |l| ensemble.dims().label(l))).collect();
    outln!("ordering\t({})", ordering.join(","));
    outln!("witnesses\t({})", witnesses.join(","));
    if let (Some(e), Some(t)) = (&report.entanglement, &report.thermo) {
        outln!("E_f = D = E_tot\t{:.6} bits", e.eof_bits);
        outln!("entropy_bits\t{:.6}", t.entropy_bits);
        outln!("temperature_proxy\t{}", opt6(t.temperature_proxy));
        outln!("note\t{}", t.note);
    }
    Ok(Status::Ok)
}

fn grid_from(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || to < from {
        bail!("need --step > 0 and --to >= --from");
    }
    let count = ((to - from) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|k| from + k as f64 * step).map(|x| x.min(to)).collect())
}

pub fn thermo_table_cmd(args: &ThermoArgs) -> Result<Status> {
    let grid = match &args.grid {
        Some(g) => g.clone(),
        None => grid_from(args.from, args.to, args.step)?,
    };
    let rows = grid.iter().map(|&f| werner_row(f).map_err(Into::into)).collect::<Result<Vec<WernerRow>>>()?;
    if args.common.json {
        print_json(&rows)?;
        return Ok(Status::Ok);
    }
    outln!("F\tentropy_bits\thashing_bits\trains_bits\teof_bits\ttemperature_proxy");
    for r in &rows {
        outln!(
            "{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{}",
            r.fidelity,
            r.entropy_bits,
            r.hashing_bits,
            r.rains_bits,
            r.eof_bits,
            opt6(r.temperature_proxy)
        );
    }
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct SweepRow {
    c: f64,
    error: Option<String>,
    s_best: Option<f64>,
    s_rho_p: f64,
    s_werner: f64,
    concurrence: Option<f64>,
    residual: Option<f64>,
    converged: Option<bool>,
    origin: Option<Origin>,
    restart: Option<usize>,
    restarts_used: Option<usize>,
    evaluations: Option<usize>,
    /// Row-major `[re, im]` entries of the best state.
    state: Option<Vec<Vec<[f64; 2]>>>,
}

pub fn maxent_sweep_cmd(args: &MaxentArgs) -> Result<Status> {
    let opts = MaxEntOptions {
        restarts: args.restarts,
        constraint_tol: args.tol,
        max_evals: args.max_evals,
        seed: args.common.seed,
        ..Default::default()
    };
    let points = if args.grid.len() == 1 {
        vec![qent_core::maxent::SweepPoint { c: args.grid[0], outcome: maxent_search(args.grid[0], &opts) }]
    } else {
        maxent_sweep(&args.grid, &opts)
    };
    if let Some(dir) = &args.qmx_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }

    let mut rows = Vec::with_capacity(points.len());
    for p in &points {
        let s_rho_p = entropy_rho_p(p.c.clamp(0.0, 1.0))?;
        let s_werner = entropy_werner((0.5 * (1.0 + p.c)).clamp(0.25, 1.0))?;
        let row = match &p.outcome {
            Ok(r) => {
                if let Some(dir) = &args.qmx_dir {
                    write_point(dir, p.c, &r.best_state)?;
                }
                let m = r.best_state.matrix();
                let state = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect();
                SweepRow {
                    c: p.c,
                    error: None,
                    s_best: Some(r.best_entropy_bits),
                    s_rho_p,
                    s_werner,
                    concurrence: Some(r.concurrence),
                    residual: Some(r.constraint_residual),
                    converged: Some(r.converged),
                    origin: Some(r.origin),
                    restart: Some(r.best_restart),
                    restarts_used: Some(r.restarts_used),
                    evaluations: Some(r.evaluations),
                    state: Some(state),
                }
            }
            Err(e) => SweepRow {
                c: p.c,
                error: Some(e.to_string()),
                s_best: None,
                s_rho_p,
                s_werner,
                concurrence: None,
                residual: None,
                converged: None,
                origin: None,
                restart: None,
                restarts_used: None,
                evaluations: None,
                state: None,
            },
        };
        rows.push(row);
    }

    if args.common.json {
        print_json(&rows)?;
    } else {
        outln!("c\ts_best\ts_rho_p\ts_werner\tresidual\tconverged\torigin\trestart");
        for r in &rows {
            match &r.error {
                Some(e) => outln!("{:.6}\terror: {e}", r.c),
                None => outln!(
                    "{:.6}\t{}\t{:.6}\t{:.6}\t{:.2e}\t{}\t{}\t{}",
                    r.c,
                    opt6(r.s_best),
                    r.s_rho_p,
                    r.s_werner,
                    r.residual.unwrap_or(f64::NAN),
                    r.converged.unwrap_or(false),
                    r.origin.map_or("-", origin_name),
                    r.restart.unwrap_or(0)
                ),
            }
        }
    }

    for i in monotonicity_violations(&points, 1e-6) {
        eprintln!("warning: best entropy increases from c={} to c={}", points[i].c, points[i + 1].c);
    }
    if let Some(bad) = rows.iter().find(|r| r.error.is_some()) {
        bail!("maxent search failed at c={}: {}", bad.c, bad.error.as_deref().unwrap_or(""));
    }
    let unconverged: Vec<String> =
        rows.iter().filter(|r| r.converged == Some(false)).map(|r| r.c.to_string()).collect();
    Ok(if unconverged.is_empty() {
        Status::Ok
    } else {
        Status::NotConverged(format!("maxent search did not converge at c = {}", unconverged.join(", ")))
    })
}

fn origin_name(o: Origin) -> &'static str {
    match o {
        Origin::Analytic => "analytic",
        Origin::RhoPStart => "rho_p_start",
        Origin::WernerStart => "werner_start",
        Origin::RandomStart => "random_start",
    }
}

fn write_point(dir: &Path, c: f64, rho: &DensityMatrix) -> Result<()> {
    let path = dir.join(format!("c_{c:.4}.qmx"));
    fs::write(&path, write_qmx(rho)).with_context(|| format!("writing {}", path.display()))
}

#[derive(Serialize)]
struct PreservationRow {
    #[serde(flatten)]
    inner: Preservation,
    abs_diff: f64,
}

pub fn preservation_cmd(args: &PreservationArgs) -> Result<Status> {
    let grid = args.a.clone().unwrap_or_else(|| {
        let lo = std::f64::consts::FRAC_1_SQRT_2;
        (0..10).map(|k| lo + (1.0 - lo) * k as f64 / 9.0).collect()
    });
    let rows = grid
        .iter()
        .map(|&a| {
            let p = check_preservation(a)?;
            Ok(PreservationRow { abs_diff: (p.e_pure - p.e_twirled).abs(), inner: p })
        })
        .collect::<Result<Vec<_>>>()?;
    if args.common.json {
        print_json(&rows)?;
        return Ok(Status::Ok);
    }
    outln!("a\tb\tF\te_pure\te_twirled\tabs_diff\tpreserved");
    for r in &rows {
        let p = &r.inner;
        outln!(
            "{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.1e}\t{}",
            p.a, p.b, p.fidelity, p.e_pure, p.e_twirled, r.abs_diff, p.preserved
        );
    }
    Ok(Status::Ok)
}

pub fn counterexample_cmd(args: &CounterexampleArgs) -> Result<Status> {
    let pairs = match (args.n, args.m) {
        (Some(n), Some(m)) => vec![(n, m)],
        _ => vec![(3, 2), (4, 2), (4, 3), (5, 3)],
    };
    let rows = pairs
        .iter()
        .map(|&(n, m)| psi_m_twirl_decrease(n, m).map_err(Into::into))
        .collect::<Result<Vec<TwirlDecrease>>>()?;
    if args.common.json {
        print_json(&rows)?;
        return Ok(Status::Ok);
    }
    outln!("N\tM\tF\te_pure\ttwirled_upper_bound\tgap");
    for r in &rows {
        outln!("{}\t{}\t{:.6}\t{:.6}\t{:.6}\t{:.6}", r.n, r.m, r.fidelity, r.e_pure, r.twirled_upper_bound, r.gap);
    }
    Ok(Status::Ok)
}
