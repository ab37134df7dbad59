//! The binary, driven end to end.

use std::path::Path;
use std::process::{Command, Output};

use charge_tomo::cli::output::{matrix_to_json, read_matrix};
use charge_tomo::qmath::CMatrix;

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_charge-tomo")).args(args).current_dir(dir).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    std::fs::write(dir.join(name), text).unwrap();
    name.to_string()
}

#[test]
fn timing_report_lists_gate_times() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&["timing", "--out", "t"], d.path());
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("t_x          5.999232e-2 ns"));
    assert!(text.contains("route shortest (default)"));
    assert_eq!(std::fs::read_to_string(d.path().join("t/timing.txt")).unwrap(), text);
}

#[test]
fn zero_budget_fails_every_schedule() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write(d.path(), "c.cfg", "timing.t2_budget_ns = 0\n");
    let o = run(&["timing", "--config", &cfg, "--out", "t"], d.path());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(!text.contains("PASS"));
    assert_eq!(text.matches("FAIL").count(), 21);
}

#[test]
fn table_verification_exits_with_invariant_code() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&["verify-tables", "--out", "v"], d.path());
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().filter(|l| l.starts_with("invariant violated")).count(), 3);
    assert!(d.path().join("v/tables.txt").exists());
}

#[test]
fn configuration_errors_exit_with_validation_code() {
    let d = tempfile::tempdir().unwrap();
    let bad = write(d.path(), "bad.cfg", "device.E_C.value = oops\n");
    for args in [
        vec!["timing", "--config", "missing.cfg"],
        vec!["timing", "--config", bad.as_str()],
        vec!["tomo-state"],
        vec!["tomo-process", "--shots", "-1"],
        vec!["simulate", "--route", "qubit3"],
        vec!["nonsense"],
    ] {
        let o = run(&args, d.path());
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn non_trace_preserving_kraus_file_reports_residual() {
    let d = tempfile::tempdir().unwrap();
    let k = CMatrix::<f64>::identity(2).scale_real(0.9);
    write(d.path(), "k.json", &format!("{{\"kraus\": [{}]}}", matrix_to_json(&k, &[])));
    let cfg = write(d.path(), "c.cfg", "channel.kraus_file = k.json\n");
    let o = run(&["tomo-process", "--config", &cfg], d.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr).unwrap().contains("not trace preserving: max |sum K†K - I| = 1.8999"));
}

#[test]
fn bit_flip_chi_file() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write(d.path(), "c.cfg", "channel.preset = bit_flip(0.1)\n");
    let o = run(&["tomo-process", "--config", &cfg, "--out", "p"], d.path());
    assert_eq!(o.status.code(), Some(0));
    let chi = read_matrix(&d.path().join("p/chi.json")).unwrap();
    assert!(chi.max_abs_diff(&CMatrix::from_real_diagonal(&[0.9, 0.1, 0.0, 0.0])) < 1e-9);
    let text = std::fs::read_to_string(d.path().join("p/chi.json")).unwrap();
    assert!(text.starts_with("{\"basis_label\": \"I,X,Y,Z\", \"channel\": \"bit_flip(0.1)\""));
    let diag = std::fs::read_to_string(d.path().join("p/diagnostics.txt")).unwrap();
    assert!(diag.contains("completely_positive yes"));
}

#[test]
fn state_tomography_files_round_trip() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write(d.path(), "c.cfg", "state.preset = fig3\nshots = 10000\nseed = 5\n");
    let o = run(&["tomo-state", "--config", &cfg, "--out", "s", "--project", "on"], d.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["input.json", "raw.json", "physical.json", "state.json"] {
        let path = d.path().join("s").join(f);
        let m = read_matrix(&path).unwrap();
        assert_eq!(matrix_to_json(&m, &[]), std::fs::read_to_string(&path).unwrap(), "{f}");
    }
    let state = read_matrix(&d.path().join("s/state.json")).unwrap();
    assert_eq!(state, read_matrix(&d.path().join("s/physical.json")).unwrap());
    let bar = std::fs::read_to_string(d.path().join("s/barchart_raw.csv")).unwrap();
    assert_eq!(bar.lines().next(), Some("i,j,re,im"));
    assert_eq!(bar.lines().count(), 5);
    let records = std::fs::read_to_string(d.path().join("s/records.csv")).unwrap();
    assert_eq!(records.lines().count(), 4);
    assert!(records.contains(",Z1X1Z3Q1@q1,1,"));
}

#[test]
fn seed_changes_counts_and_flags_override_config() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write(d.path(), "c.cfg", "state.preset = bell\nshots = 100\nseed = 1\nroute = qubit1\n");
    run(&["simulate", "--config", &cfg, "--out", "a"], d.path());
    run(&["simulate", "--config", &cfg, "--out", "b", "--seed", "2", "--route", "qubit2"], d.path());
    let a = std::fs::read_to_string(d.path().join("a/records.csv")).unwrap();
    let b = std::fs::read_to_string(d.path().join("b/records.csv")).unwrap();
    assert_ne!(a, b);
    assert!(a.contains("U(t)Z1@q1"));
    assert!(b.contains("U(t)Z1@q2"));
}

#[test]
fn mismatched_qubit_count_is_rejected() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write(d.path(), "c.cfg", "device.n_qubits = 3\nstate.preset = bell\n");
    assert_eq!(run(&["tomo-state", "--config", &cfg], d.path()).status.code(), Some(1));
}
