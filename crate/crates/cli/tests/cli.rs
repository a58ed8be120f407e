//! End-to-end checks of the command-line interface: reproducibility,
//! exit codes, config-file handling and output formats.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ldpc-exit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

#[test]
fn thresholds_report_values() {
    let out = run(&["thresholds", "--ensemble", "(x^2,x^5)", "--channel", "bec"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("eps_it: 0.4294398144"), "{text}");
    assert!(text.contains("eps_ml: 0.4881508842"), "{text}");
    assert!(text.contains("design_rate: 0.5"), "{text}");
}

#[test]
fn identical_configs_identical_bytes() {
    let args = [
        "exit-curve",
        "--ensemble",
        "(x^2,x^5)",
        "--points",
        "50",
        "--seed",
        "9",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "same config must give same bytes");
    // A different seed shows up in the header.
    let c = run(&[
        "exit-curve",
        "--ensemble",
        "(x^2,x^5)",
        "--points",
        "50",
        "--seed",
        "10",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn maxwell_sim_reproducible_and_writes_traces() {
    let dir = tempfile::tempdir().unwrap();
    let dir2 = tempfile::tempdir().unwrap();
    let base = [
        "maxwell-sim",
        "--ensemble",
        "(x^2,x^5)",
        "--n",
        "600",
        "--epsilon",
        "0.47",
        "--trials",
        "3",
        "--seed",
        "5",
        "--traces",
    ];
    let mut args_a: Vec<&str> = base.to_vec();
    let da = dir.path().to_str().unwrap();
    args_a.extend(["--out", da]);
    let mut args_b: Vec<&str> = base.to_vec();
    let db = dir2.path().to_str().unwrap();
    args_b.extend(["--out", db]);
    assert!(run(&args_a).status.success());
    assert!(run(&args_b).status.success());
    for name in ["summary.csv", "trace_0000.csv", "trace_0002.csv"] {
        let a = std::fs::read(dir.path().join(name)).unwrap();
        let b = std::fs::read(dir2.path().join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert!(summary.starts_with("# ldpc-exit"));
    assert!(summary.contains("seed=5"));
    assert!(summary.lines().nth(1).unwrap() == "trial,guesses,resolutions,h_final");
    let trace = std::fs::read_to_string(dir.path().join("trace_0001.csv")).unwrap();
    assert!(trace.lines().nth(1).unwrap() == "trial,ell,h,guesses,resolutions");
}

#[test]
fn usage_errors_exit_one() {
    // Malformed ensemble string.
    let out = run(&["thresholds", "--ensemble", "x^2,x^5", "--channel", "bec"]);
    assert_eq!(out.status.code(), Some(1));
    // Unknown channel family.
    let out = run(&["thresholds", "--ensemble", "(x^2,x^5)", "--channel", "awgn"]);
    assert_eq!(out.status.code(), Some(1));
    // Missing required option.
    let out = run(&["maxwell-sim", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(1));
    // Zero trials.
    let out = run(&[
        "maxwell-sim",
        "--ensemble",
        "(x^2,x^5)",
        "--n",
        "100",
        "--trials",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    // Unknown flag is a clap usage error.
    let out = run(&["thresholds", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    // Empty kernel grid.
    let out = run(&["kernels", "--points", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn numerical_failures_exit_two() {
    // Density evolution cannot converge in one iteration.
    let out = run(&[
        "de-run",
        "--ensemble",
        "(x^2,x^5)",
        "--channel",
        "bsc:0.12",
        "--bins",
        "501",
        "--l-max",
        "25",
        "--max-iter",
        "1",
        "--tol",
        "1e-12",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("not converged"), "{err}");
}

#[test]
fn config_file_supplies_and_cli_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "ensemble=(x^2,x^5)\nchannel=bec\n# comment\npoints=40\n").unwrap();
    let out = run(&["exit-curve", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2 + 40, "40 grid rows expected");
    // CLI flag beats the file value.
    let out = run(&[
        "exit-curve",
        "--config",
        cfg.to_str().unwrap(),
        "--points",
        "10",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2 + 10);
    // Unknown config keys are rejected.
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "ensembel=(x^2,x^5)\n").unwrap();
    let out = run(&["exit-curve", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn de_run_dumps_readable_density() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("density.bin");
    let out = run(&[
        "de-run",
        "--ensemble",
        "(x^2,x^5)",
        "--channel",
        "bec:0.47",
        "--bins",
        "501",
        "--l-max",
        "25",
        "--dump",
        dump.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let bytes = std::fs::read(&dump).unwrap();
    // l_max + bins + 501 masses + two atoms.
    assert_eq!(bytes.len(), 8 + 8 + 501 * 8 + 16);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("p,iterations,residual,error_prob"));
}

#[test]
fn gexit_curve_bec_columns_identical() {
    let out = run(&[
        "gexit-curve",
        "--ensemble",
        "(x^2,x^5)",
        "--channel",
        "bec",
        "--points",
        "9",
        "--grid-min",
        "0.1",
        "--grid-max",
        "0.9",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(2) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[3], cols[4], "BEC: exit and gexit columns must agree");
    }
}

#[test]
fn oracle_check_passes() {
    let out = run(&["oracle-check"]);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(out.status.success(), "oracle suite failed:\n{text}");
    assert!(text.contains("chain-rule decomposition defect"));
    assert!(!text.contains("FAIL"));
}
