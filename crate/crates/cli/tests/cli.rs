use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};
use tempfile::TempDir;

fn sarkisov(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_sarkisov")).args(args).output().expect("binary runs");
    let text = String::from_utf8(out.stdout).expect("utf-8 output");
    let value = serde_json::from_str(&text).unwrap_or(Value::Null);
    (out.status.code().expect("exit code"), value)
}

fn write(dir: &TempDir, name: &str, value: &Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, value.to_string()).unwrap();
    path
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn bl2p2() -> Value {
    json!({
        "lattice_rank": 2,
        "rays": [[0, 1], [1, 1], [-1, 0], [-1, -1], [1, 0]],
        "max_cones": [[3, 4], [1, 4], [0, 1], [0, 2], [2, 3]]
    })
}

fn p1() -> Value {
    json!({"lattice_rank": 1, "rays": [[1], [-1]], "max_cones": [[0], [1]]})
}

fn quadric() -> Value {
    json!({
        "fan": {
            "lattice_rank": 2,
            "rays": [[1, 0], [0, 1], [-1, 0], [0, -1]],
            "max_cones": [[0, 1], [1, 2], [2, 3], [3, 0]]
        },
        "mfs_src": {"base_fan": p1(), "lattice_map": [[1, 0]]},
        "mfs_dst": {"base_fan": p1(), "lattice_map": [[0, 1]]},
        "seed": 5
    })
}

fn error_kind(v: &Value) -> &str {
    v["error"]["kind"].as_str().unwrap_or("")
}

#[test]
fn decompose_bl2p2_has_five_chambers() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.json", &json!({ "fan": bl2p2() }));
    let (code, out) = sarkisov(&["decompose", arg(&input)]);
    assert_eq!(code, 0);
    assert_eq!(out["command"], "decompose");
    assert_eq!(out["picard_rank"], 3);
    assert_eq!(out["full_chambers"], 5);
}

#[test]
fn malformed_json_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{ \"fan\": [").unwrap();
    let (code, out) = sarkisov(&["decompose", arg(&path)]);
    assert_eq!(code, 2);
    assert_eq!(error_kind(&out), "parse-error");
    assert!(!out["error"]["message"].as_str().unwrap().is_empty());
}

#[test]
fn invalid_fan_is_named() {
    let dir = TempDir::new().unwrap();
    let fan = json!({"lattice_rank": 2, "rays": [[1, 0], [2, 0]], "max_cones": [[0], [1]]});
    let input = write(&dir, "in.json", &json!({ "fan": fan }));
    let (code, out) = sarkisov(&["decompose", arg(&input)]);
    assert_eq!(code, 2);
    assert_eq!(error_kind(&out), "invalid-fan");
}

#[test]
fn missing_file_is_an_io_error() {
    let (code, out) = sarkisov(&["decompose", "/nonexistent/input.json"]);
    assert_eq!(code, 2);
    assert_eq!(error_kind(&out), "io-error");
}

#[test]
fn quadric_factors_through_one_ivm_link() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.json", &quadric());
    let (code, out) = sarkisov(&["factor", arg(&input)]);
    assert_eq!(code, 0);
    assert_eq!(out["command"], "factor");
    assert_eq!(out["link_types"], json!(["IVm"]));
    assert_eq!(out["factorization"]["slice"]["seed"], 5);
}

#[test]
fn factor_without_a_target_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let mut doc = quadric();
    doc.as_object_mut().unwrap().remove("mfs_dst");
    let input = write(&dir, "in.json", &doc);
    let (code, out) = sarkisov(&["factor", arg(&input)]);
    assert_eq!(code, 2);
    assert_eq!(error_kind(&out), "usage-error");
}

#[test]
fn slice_reports_cells() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.json", &quadric());
    let (code, out) = sarkisov(&["slice", arg(&input), "--seed", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out["command"], "slice");
    assert!(!out["slice"]["cells"].as_array().unwrap().is_empty());
}

#[test]
fn verify_accepts_output_and_rejects_tampering() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.json", &quadric());
    let (_, factor) = sarkisov(&["factor", arg(&input)]);
    let good = write(&dir, "good.json", &factor);
    let (code, report) = sarkisov(&["verify", arg(&input), arg(&good)]);
    assert_eq!(code, 0, "{report}");
    assert_eq!(report["command"], "verify");
    assert_eq!(report["passed"], true);

    let mut bad = factor.clone();
    bad["factorization"]["links"][0]["link_type"] = json!("II");
    let bad = write(&dir, "bad.json", &bad);
    let (code, report) = sarkisov(&["verify", arg(&input), arg(&bad)]);
    assert_eq!(code, 1);
    assert_eq!(report["passed"], false);
}

#[test]
fn bl2p2_demo_reproduces_the_figure() {
    let (code, out) = sarkisov(&["demo", "bl2p2"]);
    assert_eq!(code, 0);
    assert_eq!(out["demo"], "bl2p2");
    assert_eq!(out["link_types"], json!(["IVm", "II", "III", "I", "II"]));
    let names: Vec<&str> = out["model_names"].as_object().unwrap().values().map(|v| v.as_str().unwrap()).collect();
    assert!(names.contains(&"Bl2P2"));
}

#[test]
fn demo_svg_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.svg");
    let b = dir.path().join("b.svg");
    assert_eq!(sarkisov(&["demo", "bl2p2", "--svg", arg(&a), "--seed", "3"]).0, 0);
    assert_eq!(sarkisov(&["demo", "bl2p2", "--svg", arg(&b), "--seed", "3"]).0, 0);
    let (sa, sb) = (std::fs::read_to_string(&a).unwrap(), std::fs::read_to_string(&b).unwrap());
    assert!(sa.starts_with("<svg") || sa.starts_with("<?xml"));
    assert_eq!(sa, sb);
}

#[test]
fn unknown_demo_is_rejected() {
    let (code, out) = sarkisov(&["demo", "p7"]);
    assert_eq!(code, 2);
    assert!(!error_kind(&out).is_empty());
}
