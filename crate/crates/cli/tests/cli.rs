//! End-to-end checks of the command-line interface: output determinism, the
//! exit-code contract, file output and config-file handling.

use std::path::PathBuf;
use std::process::{Command, Output};

fn binary() -> PathBuf {
    let mut path = PathBuf::from(env!("CARGO_BIN_EXE_pseudospin"));
    if !path.exists() {
        path = PathBuf::from("pseudospin");
    }
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(binary())
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn splittings_table_row() {
    let out = run(&["splittings", "--j", "3/2", "--n", "0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("j,n,index,value"));
    assert!(text.contains("1.2066466983680"));
    assert!(text.contains("4.3062749268152"));
}

#[test]
fn splittings_half_spin_n3() {
    // +-sqrt(n+1) = +-2 at n = 3.
    let out = run(&["splittings", "--j", "1/2", "--n", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("2.0000000000000"));
}

#[test]
fn identical_configs_give_byte_identical_output() {
    for args in [
        vec!["splittings", "--j", "2", "--n", "0", "--n-end", "5"],
        vec!["--format", "json", "switch", "--n-qubits", "4", "--k", "2", "--seed", "9"],
        vec!["--format", "json", "decay", "--n-qubits", "3"],
        vec![
            "populations",
            "--j",
            "3/2",
            "--m",
            "-3/2",
            "--photons",
            "4",
            "--t-points",
            "50",
        ],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success(), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn invalid_ranges_exit_nonzero() {
    let out = run(&["splittings", "--j", "3/2", "--n", "5", "--n-end", "2"]);
    assert!(!out.status.success());
    let out = run(&["splittings", "--j", "bogus"]);
    assert!(!out.status.success());
    let out = run(&["populations", "--full-space"]);
    assert!(!out.status.success());
    let out = run(&["switch", "--n-qubits", "4", "--k", "3"]);
    assert!(!out.status.success());
}

#[test]
fn output_lands_in_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spectrum.csv");
    let out = run(&[
        "--output",
        path.to_str().unwrap(),
        "splittings",
        "--j",
        "1",
        "--n",
        "2",
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    // 0, +-2 sqrt(n + 3/2) at n = 2.
    assert!(text.contains("3.7416573867739"));
}

#[test]
fn config_file_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    std::fs::write(&config, r#"{"j": "1/2", "n": 0}"#).unwrap();
    let with_config = run(&[
        "--config",
        config.to_str().unwrap(),
        "splittings",
        "--j",
        "2",
        "--n",
        "7",
    ]);
    assert!(with_config.status.success());
    let direct = run(&["splittings", "--j", "1/2", "--n", "0"]);
    assert_eq!(with_config.stdout, direct.stdout);
}

#[test]
fn decay_tree_reports_recovery_two_thirds() {
    let out = run(&["--format", "json", "decay", "--n-qubits", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let tree: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(tree["total_recovery"]["num"], 2);
    assert_eq!(tree["total_recovery"]["den"], 3);
}

#[test]
fn switch_emits_circuit_and_residual() {
    let out = run(&["--format", "json", "switch", "--n-qubits", "3", "--k", "1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(v["solution"]["residual"].as_f64().unwrap() < 1e-9);
    assert!(v["trace"]["j_minus_residual"].as_f64().unwrap() < 1e-9);
    assert!(!v["circuit"]["gates"].as_array().unwrap().is_empty());
}

#[test]
fn dephasing_report_passes_checks() {
    let out = run(&["--format", "json", "dephasing", "--phi", "1", "--t-end", "50"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(v["closed_form_max_deviation"].as_f64().unwrap() < 1e-8);
    assert!(v["steady_state_max_deviation"].as_f64().unwrap() < 1e-6);
}

#[test]
fn fixture_circuits_by_name() {
    for name in [
        "q3_quartet_to_doublet",
        "q4_quintet_to_triplet",
        "q4_triplet_to_singlet",
        "q6_septet_to_quintet",
        "q6_to_triplet",
        "q6_to_singlet",
    ] {
        let out = run(&["--format", "json", "switch", "--fixture", name]);
        assert!(out.status.success(), "{name}");
    }
    let out = run(&["switch", "--fixture", "nonsense"]);
    assert!(!out.status.success());
}

#[test]
fn decompose_fixture_matches_general_multiplicities() {
    let out = run(&["--format", "json", "decompose", "--n-qubits", "4", "--n-max", "2", "--fixture"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let mult = v["report"]["multiplicities"].as_array().unwrap();
    assert_eq!(mult.len(), 3);
    assert_eq!(mult[1][1], 3); // three triplets
}

#[test]
fn populations_full_space_mode() {
    let out = run(&[
        "populations",
        "--full-space",
        "--bits",
        "000",
        "--photons",
        "4",
        "--t-points",
        "20",
        "--t-end",
        "5",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let last = text.lines().last().unwrap();
    let total: f64 = last.split(',').next_back().unwrap().parse().unwrap();
    assert!((total - 1.0).abs() < 1e-9);
}

#[test]
fn populations_spectrum_mode() {
    let out = run(&[
        "populations",
        "--j",
        "1/2",
        "--m",
        "-1/2",
        "--photons",
        "1",
        "--spectrum",
        "--t-end",
        "60",
        "--t-points",
        "1200",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("omega,magnitude"));
}
