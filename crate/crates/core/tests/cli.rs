//! End-to-end runs of the `unimon` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn unimon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unimon")).args(args).env_remove("UNIMON_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_kind(o: &Output) -> String {
    let v: Value = serde_json::from_slice(&o.stderr).unwrap_or_else(|_| panic!("stderr: {:?}", o.stderr));
    v["error"].as_str().unwrap().to_owned()
}

fn write_json(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn classify_reads_generators_and_reports_the_case() {
    let dir = tempfile::tempdir().unwrap();
    let rotation = serde_json::json!([
        [[0.0, 0.0], [-1.0, 0.0], [1.0, 0.0], [0.0, 0.0]],
        [[0.6, 0.0], [-0.8, 0.0], [0.8, 0.0], [0.6, 0.0]]
    ]);
    let o = unimon(&["classify", "--input", &write_json(dir.path(), "g.json", &rotation)]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["unitary"], true);
    assert_eq!(v["case"], "AbelianReducible");

    let parabolic = serde_json::json!([
        [[1.0, 0.0], [1.0, 0.0], [0.0, 0.0], [1.0, 0.0]],
        [[1.0, 0.0], [0.0, 1.0], [0.0, 0.0], [1.0, 0.0]]
    ]);
    let o = unimon(&["classify", "--input", &write_json(dir.path(), "p.json", &parabolic)]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["unitary"], false);
}

#[test]
fn malformed_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = unimon(&["classify", "--input", &write_json(dir.path(), "bad.json", &serde_json::json!([[1, 2]]))]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(error_kind(&o), "usage");
    let o = unimon(&["classify", "--input", "/nonexistent/file.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn spectrum_csv_lists_the_lame_eigenvalues() {
    let o = unimon(&["spectrum"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), unimon::spectrum::CSV_HEADER);
    let accepted = lines.filter(|l| l.split(',').nth(6) == Some("true")).count();
    assert!(accepted >= 10, "{text}");
}

#[test]
fn spectrum_json_round_trips() {
    let o = unimon(&["spectrum", "--format", "json", "--m-max", "1", "--n-min", "0", "--n-max", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v.as_array().expect("array of results");
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["accepted"], true);
}

#[test]
fn bad_flags_exit_with_one_and_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let o = unimon(&["spectrum", "--no-such-flag", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());
    // Fuchs relation violated
    let o = unimon(&["spectrum", "--beta", "0.3", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(error_kind(&o), "usage");
    assert!(!out.exists());
    // images are not a spectrum format
    let o = unimon(&["spectrum", "--format", "ppm"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn numerical_failures_exit_with_two() {
    let o = unimon(&["monodromy", "--step", "1e-13"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_kind(&o), "step_underflow");
}

#[test]
fn monodromy_report_has_every_field() {
    let o = unimon(&["monodromy", "--B-re", "1.5", "--B-im", "-0.5"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in [
        "params",
        "integrator",
        "P",
        "Q",
        "R",
        "P0",
        "Q0",
        "R0",
        "traces",
        "exponent_residuals",
        "det_residuals",
        "infinity_trace_ratio",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["P"].as_array().unwrap().len(), 4);
}

#[test]
fn asymptote_table_has_one_row_per_nonzero_point() {
    let o = unimon(&["asymptote", "--range", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "m,n,l0_re,l0_im,B1_re,B1_im");
    assert_eq!(text.lines().count(), 1 + 8);
}

#[test]
fn convmap_writes_image_and_sidecar_reproducibly() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: Option<&str>| {
        let out = dir.path().join(name);
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_unimon"));
        cmd.args(["convmap", "--width", "3", "--height", "2", "--extent", "2", "--max-iters", "3", "-o"])
            .arg(&out);
        match threads {
            Some(t) => cmd.env("UNIMON_THREADS", t),
            None => cmd.env_remove("UNIMON_THREADS"),
        };
        let o = cmd.output().unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        out
    };
    let a = run("a.ppm", Some("1"));
    let b = run("b.ppm", None);
    let img = std::fs::read(&a).unwrap();
    assert!(img.starts_with(b"P6\n3 2\n255\n"));
    assert_eq!(img, std::fs::read(&b).unwrap());
    let sidecar: Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("a.ppm.json")).unwrap()).unwrap();
    assert_eq!(sidecar["width"], 3);
    assert_eq!(sidecar["height"], 2);
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_unimon"))
        .args(["asymptote", "--range", "1"])
        .env("UNIMON_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn figures_writes_the_lame_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = unimon(&["figures", "--which", "fig2a", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["fig2a_eigenvalues.csv", "fig2a_lattice.csv", "fig2a_asymptotes.csv"] {
        let p = dir.path().join(name);
        assert!(p.exists(), "{name}");
        assert!(stdout(&o).contains(name));
    }
    let lattice = std::fs::read_to_string(dir.path().join("fig2a_lattice.csv")).unwrap();
    assert_eq!(lattice.lines().count(), 1 + 36);
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(unimon(&["--help"]).status.code(), Some(0));
    assert_eq!(unimon(&["--version"]).status.code(), Some(0));
    assert_eq!(unimon(&[]).status.code(), Some(1));
}
