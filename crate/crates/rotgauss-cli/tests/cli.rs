//! End-to-end CLI contract tests: exit codes, output formats, config-file
//! layering, and determinism of `verify` under a fixed seed.

use std::process::{Command, Output};

fn rotgauss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rotgauss"))
        .args(args)
        .output()
        .expect("binary must run")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn verify_all_exits_zero_when_green() {
    let out = rotgauss(&["verify", "--all"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.lines().filter(|l| l.starts_with("[pass]")).count() >= 12);
    assert!(!text.contains("[FAIL]"));
}

#[test]
fn verify_exits_one_on_injected_fault() {
    let out = rotgauss(&["verify", "--id", "coef-agreement", "--inject-fault", "h412:1e-3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("[FAIL]"));
}

#[test]
fn usage_errors_exit_two() {
    // Unknown flag (clap) and missing required data (engine) both exit 2.
    let out = rotgauss(&["classify", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
    let out = rotgauss(&["classify", "--family", "dsmin"]);
    assert_eq!(out.status.code(), Some(2), "missing grid is a usage error");
    let out = rotgauss(&["classify", "--family", "nope", "--grid", "s=0:1:5,t=0:1:5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = rotgauss(&["verify", "--id", "thm-9.9"]);
    assert_eq!(out.status.code(), Some(2));
    let out = rotgauss(&["classify", "--family", "dsmin", "--grid", "s=0:1:5"]);
    assert_eq!(out.status.code(), Some(2), "grid needs both axes");
}

#[test]
fn classify_emits_first_kind_json() {
    let out = rotgauss(&[
        "classify",
        "--family",
        "dsmin",
        "--params",
        "r0=1,a=1,b=2",
        "--grid",
        "s=-1:1:11,t=0.1:3:11",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["classification"]["verdict"], "first_kind");
    assert_eq!(json["classification"]["C"], serde_json::json!([0.0, 0.0, 0.0, 0.0, 0.0, 0.0]));
}

#[test]
fn analyze_json_round_trips_via_cli() {
    let dir = std::env::temp_dir().join("rotgauss-cli-roundtrip");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = rotgauss(&[
        "analyze",
        "--family",
        "cone",
        "--params",
        "c0=0.5",
        "--grid",
        "s=0.2:1.2:6,t=0.3:1.5:6",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    let reserialized = serde_json::to_string_pretty(&parsed).unwrap();
    let reparsed: serde_json::Value = serde_json::from_str(&reserialized).unwrap();
    assert_eq!(parsed, reparsed, "numeric content must survive a round trip");
    assert_eq!(parsed["samples"].as_array().unwrap().len(), 36);
}

#[test]
fn mesh_csv_has_documented_header() {
    let out = rotgauss(&[
        "mesh",
        "--family",
        "m1",
        "--profile",
        "power:b0=1,exp=2",
        "--params",
        "b=2",
        "--grid",
        "s=0.1:0.4:5,t=-1:1:5",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), "s,t,x1,x2,x3,x4");
    assert_eq!(text.lines().count(), 26);
}

#[test]
fn config_file_supplies_flags_and_flags_override() {
    let dir = std::env::temp_dir().join("rotgauss-cli-config");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.conf");
    std::fs::write(
        &path,
        "# classify the de Sitter witness\nfamily = dsmin\nparams = r0=1,a=1,b=2\ngrid = s=-1:1:11,t=0.1:3:11\n",
    )
    .unwrap();
    let out = rotgauss(&["classify", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["classification"]["verdict"], "first_kind");

    // An explicit flag overrides the config value.
    let out = rotgauss(&[
        "classify",
        "--config",
        path.to_str().unwrap(),
        "--family",
        "cone",
        "--params",
        "c0=0.5",
        "--grid",
        "s=0.2:1.4:11,t=0.3:1.5:11",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["classification"]["verdict"], "not_pointwise_1_type");
}

#[test]
fn verify_is_deterministic_for_a_seed() {
    let dir = std::env::temp_dir().join("rotgauss-cli-seed");
    std::fs::create_dir_all(&dir).unwrap();
    let (p1, p2) = (dir.join("a.json"), dir.join("b.json"));
    for p in [&p1, &p2] {
        let out = rotgauss(&[
            "verify",
            "--id",
            "codazzi",
            "--seed",
            "1234",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let a = std::fs::read_to_string(&p1).unwrap();
    let b = std::fs::read_to_string(&p2).unwrap();
    assert_eq!(a, b, "same seed must reproduce the same outcome bytes");
}

#[test]
fn families_lists_catalog() {
    let out = rotgauss(&["families"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for name in ["double", "m1", "m2", "dsmin", "plane", "cone"] {
        assert!(text.contains(name));
    }
}
