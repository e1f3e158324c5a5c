use std::path::PathBuf;
use std::process::{Command, Output};

fn parity(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parity"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("parity-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn verify_known_case_succeeds() {
    let out = parity(&["verify", "--case", "5,4,1", "--terms", "10000"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("pass"));
}

#[test]
fn unknown_case_is_a_usage_error() {
    let out = parity(&["verify", "--case", "6,0,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("6,0,1"));
    assert_eq!(
        parity(&["certify", "--case", "6,0,1"]).status.code(),
        Some(2)
    );
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(
        parity(&["verify", "--case", "5,4,1", "--terms", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(parity(&["verify"]).status.code(), Some(2));
    let out = parity(&["expand", "--series", "q:3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--series"));
    assert_eq!(
        parity(&["expand", "--quotient", "eta(3)^2 @ N=4"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn certify_reports_sturm_bound() {
    let out = parity(&["certify", "--case", "11,6,1", "--format", "structured"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["sturm_bound"], 1080);
    assert_eq!(v["verdict"], "PROVEN");
}

#[test]
fn failed_certification_writes_nothing() {
    let path = scratch("low-power.json");
    let out = parity(&[
        "certify",
        "--case",
        "5,4,1",
        "--clearing-power",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!path.exists());
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAILED at pole_clearing"));
}

#[test]
fn certify_writes_requested_file() {
    let path = scratch("three.json");
    let out = parity(&[
        "certify",
        "--case",
        "3,2,3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["case"], "3,2,3");
}

#[test]
fn tables_and_expansions() {
    let out = parity(&["table", "--series", "p:1", "--x", "11"]);
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "# p_1 x=11 runs from odd\n2 1 5 3\n"
    );
    let out = parity(&["table", "--series", "b:5", "--x", "64", "--format", "raw"]);
    assert_eq!(out.stdout.len(), 8);
    let out = parity(&[
        "expand",
        "--series",
        "p:1",
        "--terms",
        "10",
        "--format",
        "structured",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["odd"], serde_json::json!([0, 1, 3, 4, 5, 6, 7]));
    let out = parity(&["expand", "--quotient", "eta(1)^4", "--terms", "30"]);
    assert!(
        String::from_utf8_lossy(&out.stdout).contains("offset 4/24")
            && String::from_utf8_lossy(&out.stdout).contains("odd at: 0 4 8 20 28")
    );
}

#[test]
fn density_commands() {
    let out = parity(&["density", "series", "--series", "p:1", "--x", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("odd=7"));
    let out = parity(&["density", "landau", "--x", "1000", "--format", "structured"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["checkpoints"].as_array().unwrap().len(), 4);
    let out = parity(&["density", "regular", "--x", "10000"]);
    assert_eq!(out.status.code(), Some(0));
    let out = parity(&["density", "conjecture", "--ts", "1,4", "--x", "1000"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("0.125000"));
}
