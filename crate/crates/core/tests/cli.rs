use clap::Parser;

use harmoney::cli::{run, Cli, EXIT_ABORT, EXIT_CONFIG, EXIT_STRICT};

fn exec(args: &[&str]) -> i32 {
    let argv = std::iter::once("harmoney").chain(args.iter().copied());
    run(Cli::try_parse_from(argv).expect("arguments parse"))
}

#[test]
fn simulate_writes_trajectory_summary_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(exec(&["simulate", "--scenario", "FC-011", "--t-end", "50", "--out", out]), 0);
    for f in ["FC-011.csv", "summary.txt", "config.txt"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let summary = std::fs::read_to_string(dir.path().join("summary.txt")).unwrap();
    assert!(summary.lines().any(|l| l.starts_with("FC-011 knee T")));
    let echoed = harmoney::config::Config::from_file(&dir.path().join("config.txt")).unwrap();
    assert_eq!(echoed.run.t_end, 50.0);
    assert_eq!(echoed.scenarios, vec!["FC-011"]);
}

#[test]
fn landmarks_recomputes_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(exec(&["simulate", "--scenario", "MC-011", "--t-end", "40", "--out", out]), 0);
    let csv = dir.path().join("MC-011.csv");
    assert_eq!(exec(&["landmarks", csv.to_str().unwrap()]), 0);
}

#[test]
fn strict_fails_on_missed_references() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    // A 30-unit run cannot reach the published landmark times.
    assert_eq!(exec(&["simulate", "--scenario", "FC-000", "--t-end", "30", "--out", out, "--strict"]), EXIT_STRICT);
}

#[test]
fn config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "[params]\nnot_a_parameter = 1\n").unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(exec(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out]), EXIT_CONFIG);
    assert_eq!(exec(&["simulate", "--scenario", "XX-999", "--out", out]), EXIT_CONFIG);
    assert_eq!(exec(&["audit", "--dt=-1"]), EXIT_CONFIG);
}

#[test]
fn aborted_runs_exit_two_and_keep_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("collapse.cfg");
    // With no extraction technology left the resource sector cannot run.
    std::fs::write(&cfg, "scenario = FC-000\nt_end = 20\n[params]\nnu_g = 1e-300\n").unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(exec(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out]), EXIT_ABORT);
}

#[test]
fn audit_passes_on_a_preset() {
    assert_eq!(exec(&["audit", "--scenario", "MC-000", "--t-end", "100", "--strict"]), 0);
}

#[test]
fn binary_maps_usage_errors_to_config_exit() {
    let bin = env!("CARGO_BIN_EXE_harmoney");
    let status = std::process::Command::new(bin).args(["simulate", "--bogus"]).output().unwrap().status;
    assert_eq!(status.code(), Some(EXIT_CONFIG));
    let status = std::process::Command::new(bin).arg("--help").output().unwrap().status;
    assert_eq!(status.code(), Some(0));
}
