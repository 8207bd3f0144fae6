use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn hsvol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hsvol")).args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn check_prints_orbit_summary() {
    let out = hsvol(&["check", "--input", &fixture("boundary_4simplex.json")]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "5 tets, 10 edges, orbit sizes [3×10]\n");
}

#[test]
fn check_writes_json_to_output() {
    let path = scratch("check.json");
    let out = hsvol(&["check", "--input", &fixture("boundary_4simplex.json"), "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["edges"], 10);
    assert_eq!(v["closed"], true);
}

#[test]
fn malformed_inputs_exit_one() {
    for name in ["duplicate_face.json", "unmatched_face.json", "boundary_4simplex_edge_sum_broken.json"] {
        let out = hsvol(&["classify", "--input", &fixture(name)]);
        assert_eq!(out.status.code(), Some(1), "{name}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(hsvol(&["check", "--input", "/nonexistent.json"]).status.code(), Some(1));
    assert_eq!(hsvol(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(hsvol(&["check"]).status.code(), Some(1));
}

#[test]
fn boundary_requires_test_mode() {
    let input = fixture("single_flipped_euclidean.json");
    assert_eq!(hsvol(&["check", "--input", &input]).status.code(), Some(1));
    let out = hsvol(&["classify", "--test-mode", "--input", &input]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["structure"]["simplices"][0]["kind"], "FlippedEuclidean");
    assert_eq!(v["test_mode"], true);
}

#[test]
fn infeasible_exits_two() {
    for cmd in ["feasible", "maximize"] {
        let out = hsvol(&[cmd, "--input", &fixture("identity_double.json")]);
        assert_eq!(out.status.code(), Some(2), "{cmd}");
    }
}

#[test]
fn non_critical_report_exits_three() {
    let out = hsvol(&["report", "--input", &fixture("boundary_4simplex_perturbed.json")]);
    assert_eq!(out.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["optimization"]["converged"], false);
    assert_eq!(v["edge_consistency"]["pass"], false);

    let ok = hsvol(&["report", "--input", &fixture("boundary_4simplex_symmetric.json")]);
    assert!(ok.status.success());
}

#[test]
fn iteration_cap_exits_three() {
    let out = hsvol(&["maximize", "--seed", "3", "--max-iter", "1", "--input", &fixture("boundary_4simplex.json")]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn output_is_byte_identical() {
    let args = ["maximize", "--seed", "3", "--input", &fixture("boundary_4simplex.json")];
    let (a, b) = (hsvol(&args), hsvol(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_file_and_flag_precedence() {
    let input = fixture("boundary_4simplex.json");
    let config = fixture("config_example.json");
    let out = hsvol(&["maximize", "--config", &config, "--input", &input]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["optimization"]["iterations"].as_u64().unwrap() > 0);

    let out = hsvol(&["maximize", "--config", &config, "--grad-tol", "1e-3", "--input", &input]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["optimization"]["grad_tol"].as_f64(), Some(1e-3));

    let bad = scratch("bad_config.json");
    std::fs::write(&bad, "{\"grad_toll\": 1e-9}").unwrap();
    assert_eq!(hsvol(&["check", "--config", bad.to_str().unwrap(), "--input", &input]).status.code(), Some(1));
    assert_eq!(hsvol(&["maximize", "--grad-tol", "-1", "--input", &input]).status.code(), Some(1));
}

#[test]
fn floats_use_seventeen_digits() {
    let out = hsvol(&["classify", "--input", &fixture("boundary_4simplex_symmetric.json")]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"volume\": 1.9739208802178"), "{text}");
}
