use std::path::PathBuf;
use std::process::{Command, Output};

use qent_core::MeasureReport;
use serde_json::Value;

fn qent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qent"))
        .args(args)
        .env_remove("QENT_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).to_string_lossy().into_owned()
}

fn field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}\t")))
        .unwrap_or_else(|| panic!("no '{key}' in output:\n{text}"))
        .to_string()
}

#[test]
fn measure_werner_json() {
    let o = qent(&["measure", "--state", "werner:0.75", "--json"]);
    assert!(o.status.success());
    let r: MeasureReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!((r.eof_bits.unwrap() - 0.35457890266527003).abs() < 1e-12);
    assert!((r.concurrence.unwrap() - 0.5).abs() < 1e-12);
    assert!(!r.ppt);
    assert!(r.e_r_bits.is_none());
}

#[test]
fn measure_human_uses_six_decimals() {
    let o = qent(&["measure", "--state", "werner:0.75"]);
    let text = stdout(&o);
    assert_eq!(field(&text, "eof_bits"), "0.354579");
    assert_eq!(field(&text, "ppt"), "no");
}

#[test]
fn measure_file_matches_named_state() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.qmx");
    let rho = qent_core::families::werner(0.83).unwrap();
    std::fs::write(&path, qent_core::io::write_qmx(&rho)).unwrap();
    let a: MeasureReport =
        serde_json::from_slice(&qent(&["measure", "--file", path.to_str().unwrap(), "--json"]).stdout).unwrap();
    let b: MeasureReport = serde_json::from_slice(&qent(&["measure", "--state", "werner:0.83", "--json"]).stdout).unwrap();
    assert!((a.entropy_bits - b.entropy_bits).abs() < 1e-12);
    assert!((a.eof_bits.unwrap() - b.eof_bits.unwrap()).abs() < 1e-12);
    assert!((a.g_a_bits - b.g_a_bits).abs() < 1e-12);
    assert!((a.ppt_min_eig - b.ppt_min_eig).abs() < 1e-12);
}

#[test]
fn measure_with_relative_entropy_is_deterministic() {
    let run = || stdout(&qent(&["measure", "--state", "werner:0.9", "--e-r", "--json", "--seed", "7"]));
    let first = run();
    assert_eq!(first, run());
    let r: MeasureReport = serde_json::from_str(&first).unwrap();
    let h09 = 0.4689955935892811;
    assert!((r.e_r_bits.unwrap() - (1.0 - h09)).abs() < 1e-3);
}

#[test]
fn malformed_qmx_names_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.qmx");
    std::fs::write(&path, "qmx 1\ndims 1 1\nx,0\n").unwrap();
    let o = qent(&["measure", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr).into_owned();
    assert!(err.contains("line 3"), "{err}");
    assert!(err.contains("column"), "{err}");
}

#[test]
fn unknown_flags_and_bad_values_exit_one() {
    assert_eq!(qent(&["measure", "--state", "werner:0.9", "--nope"]).status.code(), Some(1));
    assert_eq!(qent(&["measure", "--state", "werner:1.5"]).status.code(), Some(1));
    assert_eq!(qent(&["measure"]).status.code(), Some(1));
    assert_eq!(qent(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn help_succeeds_and_lists_columns() {
    let o = qent(&["thermo-table", "--help"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("TSV columns"));
}

#[test]
fn ensemble_check_five_by_five() {
    let o = qent(&["ensemble-check", "--file", &data("five_by_five.ens")]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(field(&text, "ordering"), "(1,2,3)");
    assert_eq!(field(&text, "witnesses"), "(A,B,—)");
    assert_eq!(field(&text, "E_f = D = E_tot"), "1.000000 bits");

    let json: Value =
        serde_json::from_slice(&qent(&["ensemble-check", "--file", &data("five_by_five.ens"), "--json"]).stdout).unwrap();
    assert_eq!(json["certificate"]["ordering"], serde_json::json!([0, 1, 2]));
    assert!((json["entanglement"]["eof_bits"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn ensemble_check_bell_pair_has_no_certificate() {
    let o = qent(&["ensemble-check", "--file", &data("bell_pair.ens")]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "locally_orthogonal"), "no");
}

#[test]
fn preservation_demo_matches() {
    let o = qent(&["preservation-demo", "--a", "0.9", "--json"]);
    let rows: Value = serde_json::from_slice(&o.stdout).unwrap();
    let row = &rows[0];
    assert!(row["preserved"].as_bool().unwrap());
    assert!(row["abs_diff"].as_f64().unwrap() < 1e-9);
}

#[test]
fn counterexample_demo_gap() {
    let o = qent(&["counterexample-demo", "--n", "3", "--m", "2", "--json"]);
    let rows: Value = serde_json::from_slice(&o.stdout).unwrap();
    let bound = rows[0]["twirled_upper_bound"].as_f64().unwrap();
    assert!((bound - 0.792481250360578).abs() < 1e-12);
    assert_eq!(qent(&["counterexample-demo", "--n", "3"]).status.code(), Some(1));
}

#[test]
fn thermo_table_rows() {
    let o = qent(&["thermo-table", "--grid", "0.55,0.95"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("F\tentropy_bits"));
    assert!(lines[2].starts_with("0.950000\t0.365645\t0.634355"));
}

#[test]
fn twirl_writes_state() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.qmx");
    let o = qent(&["twirl", "--state", "schmidt:0.8,0.6", "--out", out.to_str().unwrap(), "--json"]);
    assert!(o.status.success());
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((r["fidelity"].as_f64().unwrap() - 0.98).abs() < 1e-12);
    let twirled = qent_core::io::parse_qmx(&std::fs::read_to_string(out).unwrap()).unwrap();
    let expected = qent_core::families::werner(0.98).unwrap();
    assert!(qent_core::linalg::max_abs_diff(twirled.matrix(), expected.matrix()) < 1e-12);
}

#[test]
fn maxent_sweep_endpoints_and_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = qent(&[
        "maxent-sweep", "--grid", "0,1", "--restarts", "2", "--json", "--qmx-dir", dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let rows: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((rows[0]["s_best"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!(rows[1]["s_best"].as_f64().unwrap().abs() < 1e-12);
    assert!(dir.path().join("c_0.0000.qmx").exists());
    assert!(dir.path().join("c_1.0000.qmx").exists());
}

#[test]
fn maxent_sweep_seed_from_env_is_deterministic() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_qent"))
            .args(["maxent-sweep", "--grid", "0.7", "--restarts", "3", "--max-evals", "500", "--json"])
            .env("QENT_SEED", seed)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("11"), run("11"));
}

#[test]
fn maxent_sweep_nonconvergence_exits_two() {
    let o = qent(&["maxent-sweep", "--grid", "0.9", "--restarts", "2", "--max-evals", "200", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("did not converge"));
    assert!(stdout(&o).lines().count() == 2);
}

#[test]
fn maxent_sweep_reports_bad_points_without_aborting() {
    let o = qent(&["maxent-sweep", "--grid", "0,1.5", "--restarts", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("error"));
    assert!(text.lines().nth(1).unwrap().starts_with("0.000000\t2.000000"));
}
