//! End-to-end tests of the `edgeplasma` binary: exit codes, file outputs,
//! manifest integrity, determinism, and configuration precedence.

use serde_json::Value;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_edgeplasma"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn edgeplasma")
}

fn assert_code(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout:\n{}\nstderr:\n{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    h.update(bytes);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[test]
fn help_and_usage_errors() {
    assert_code(&run(&["--help"]), 0);
    assert_code(&run(&["spectrum", "--help"]), 0);
    // clap rejects unknown flags with exit 2
    assert_code(&run(&["spectrum", "--bogus"]), 2);
    // missing required flag
    assert_code(&run(&["continue"]), 2);
    // malformed range strings
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    assert_code(
        &run(&["spectrum", "--dT-range", "0:1:0", "-o", out.to_str().unwrap()]),
        2,
    );
    assert_code(
        &run(&["spectrum", "--dT-range", "nope", "-o", out.to_str().unwrap()]),
        2,
    );
    assert_code(&run(&["stability", "--threads", "0", "-o", out.to_str().unwrap()]), 2);
    assert_code(&run(&["hopf", "--k2", "0", "-o", out.to_str().unwrap()]), 2);
    assert_code(
        &run(&["simulate", "--ic", "bogus", "-o", out.to_str().unwrap()]),
        2,
    );
}

#[test]
fn config_file_errors_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "this is === not toml").unwrap();
    let out = dir.path().join("o");
    assert_code(
        &run(&["stability", "--config", bad.to_str().unwrap(), "-o", out.to_str().unwrap()]),
        2,
    );
    // unknown key is rejected, not silently ignored
    let unknown = dir.path().join("unknown.toml");
    fs::write(&unknown, "[domain]\nmisspelled = 1.0\n").unwrap();
    assert_code(
        &run(&["stability", "--config", unknown.to_str().unwrap(), "-o", out.to_str().unwrap()]),
        2,
    );
    // missing config file
    assert_code(
        &run(&["stability", "--config", "/definitely/not/here.toml", "-o", out.to_str().unwrap()]),
        2,
    );
}

#[test]
fn runtime_failures_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    // inviscid integration is rejected by the library
    assert_code(
        &run(&["simulate", "--nu", "0", "--t-end", "1", "-o", out.to_str().unwrap()]),
        1,
    );
    // nonexistent state file
    assert_code(
        &run(&["energy", "--state", "/no/such/state.json", "-o", out.to_str().unwrap()]),
        1,
    );
}

#[test]
fn spectrum_outputs_and_manifest_hashes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sp");
    let o = run(&[
        "spectrum",
        "--dT-range",
        "0.0:0.2:5",
        "--k1-max",
        "3",
        "--k2-max",
        "3",
        "--continuous-k2",
        "0.1:2.0:8",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_code(&o, 0);
    let spectrum = fs::read_to_string(out.join("spectrum.csv")).unwrap();
    let mut lines = spectrum.lines();
    assert_eq!(lines.next(), Some("# format: 1"));
    assert_eq!(
        lines.next(),
        Some("dT,k1,k2,re_lambda_plus,im_lambda_plus,re_lambda_minus,im_lambda_minus")
    );
    // 5 dT values x k1 in 1..=3 x k2 in -3..=3 -> 105 data rows
    assert_eq!(spectrum.lines().count(), 2 + 5 * 3 * 7);
    let strip = fs::read_to_string(out.join("strip.csv")).unwrap();
    assert!(strip.starts_with("# format: 1\nw,"));
    assert_eq!(strip.lines().count(), 2 + 8);

    let manifest = read_json(&out.join("manifest.json"));
    assert_eq!(manifest["format"], 1);
    let outputs = manifest["outputs"].as_array().unwrap();
    assert_eq!(outputs.len(), 2);
    for entry in outputs {
        let path = out.join(entry["path"].as_str().unwrap());
        let bytes = fs::read(&path).unwrap();
        assert_eq!(entry["bytes"].as_u64().unwrap(), bytes.len() as u64);
        assert_eq!(entry["sha256"].as_str().unwrap(), sha256_hex(&bytes));
    }
    assert!(manifest["command"].as_str().unwrap().contains("spectrum"));
}

#[test]
fn stability_report_classifies_reference_channel() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("st");
    assert_code(&run(&["stability", "-o", out.to_str().unwrap()]), 0);
    let report = read_json(&out.join("stability.json"));
    assert_eq!(report["classification"]["class"], "primary");
    let regions = report["regions"].as_array().unwrap();
    assert_eq!(regions.len(), 10);
    assert_eq!(regions[0]["status"], "interval");
    let hi = regions[0]["d_t_upper"].as_f64().unwrap();
    assert!((hi - 0.161805097176).abs() < 1e-9, "dT2 = {hi}");
    // wavenumber 1 is the only unstable one at the reference viscosity
    assert_eq!(regions[4]["status"], "absent");
}

#[test]
fn hopf_report_reference_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("hp");
    assert_code(&run(&["hopf", "-o", out.to_str().unwrap()]), 0);
    let report = read_json(&out.join("hopf.json"));
    let thresholds = report["thresholds"].as_array().unwrap();
    assert_eq!(thresholds.len(), 2);
    let right = &thresholds[1];
    assert_eq!(right["which"], "right");
    let b = right["b"].as_array().unwrap();
    assert!((b[0].as_f64().unwrap() + 1.16581574864).abs() < 1e-6);
    assert!(right["a_dual_residual"].as_f64().unwrap() < 1e-12);
    assert!(right["b_residual"].as_f64().unwrap() < 1e-8);
    assert!(right["relation_residual"].as_f64().unwrap() < 1e-12);
    let cycle = &right["cycle"];
    assert!(cycle["radius"].as_f64().unwrap() > 0.0);
    assert!(cycle["period_lab"].as_f64().unwrap() > 0.0);
    // left threshold mirrors the real part of the linear coefficient
    let a_left = thresholds[0]["a"].as_array().unwrap();
    let a_right = right["a"].as_array().unwrap();
    assert!((a_left[0].as_f64().unwrap() + a_right[0].as_f64().unwrap()).abs() < 1e-9);
}

#[test]
fn simulate_is_deterministic_and_energy_reads_back() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = run(&[
            "simulate",
            "--ic",
            "random",
            "--seed",
            "11",
            "--t-end",
            "5",
            "--k1-max",
            "8",
            "--k2-max",
            "8",
            "-o",
            out.to_str().unwrap(),
        ]);
        assert_code(&o, 0);
    }
    assert_eq!(
        fs::read(a.join("traces.csv")).unwrap(),
        fs::read(b.join("traces.csv")).unwrap()
    );
    assert_eq!(
        fs::read(a.join("state.json")).unwrap(),
        fs::read(b.join("state.json")).unwrap()
    );
    let manifest = read_json(&a.join("manifest.json"));
    assert_eq!(manifest["seeds"].as_array().unwrap(), &[Value::from(11u64)]);
    let grid = fs::read_to_string(a.join("grid.csv")).unwrap();
    assert!(grid.starts_with("# format: 1\nx1,x2,u1,u2"));

    // feed the final state back through the energy diagnostics
    let out = dir.path().join("en");
    let state = a.join("state.json");
    let o = run(&[
        "energy",
        "--state",
        state.to_str().unwrap(),
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_code(&o, 0);
    let report = read_json(&out.join("energy.json"));
    assert!(report["poincare"]["satisfied"].as_bool().unwrap());
    assert!(report["cross_identity_residual"].as_f64().unwrap() < 1e-10);
    assert!(report["l2_sq"].as_f64().unwrap() > 0.0);
}

#[test]
fn config_precedence_flags_over_file_over_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "[domain]\nnu = 1e-3\nTplus = 0.2\n").unwrap();
    let out = dir.path().join("o");
    let o = run(&[
        "stability",
        "--config",
        cfg.to_str().unwrap(),
        "--nu",
        "2e-3",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_code(&o, 0);
    let manifest = read_json(&out.join("manifest.json"));
    let domain = &manifest["config"]["domain"];
    assert_eq!(domain["nu"].as_f64().unwrap(), 2e-3); // flag wins
    assert_eq!(domain["Tplus"].as_f64().unwrap(), 0.2); // file wins
    assert_eq!(domain["L1"].as_f64().unwrap(), 2.0); // default
    assert_eq!(domain["Tminus"].as_f64().unwrap(), 0.1); // default
}

#[test]
fn continuation_writes_bifurcation_diagram() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c");
    let o = run(&[
        "continue",
        "--dT-range",
        "0.08:0.12:2",
        "--transient",
        "30",
        "--window",
        "30",
        "--k1-max",
        "8",
        "--k2-max",
        "8",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_code(&o, 0);
    let csv = fs::read_to_string(out.join("bifurcation.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("# format: 1"));
    assert_eq!(lines.next(), Some("dT,amplitude,period,classification"));
    assert_eq!(csv.lines().count(), 4);
    // both points sit inside the unstable interval: sustained amplitude
    for line in csv.lines().skip(2) {
        let amp: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!(amp > 1e-2, "line: {line}");
    }
    let summary = read_json(&out.join("bifurcation.json"));
    assert_eq!(summary["points"].as_array().unwrap().len(), 2);
}
