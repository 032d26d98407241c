use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn fansy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fansy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = fansy(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn strs(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect()
}

#[test]
fn fansy_both_n4_is_equal() {
    let v = json_ok(&["fansy", "--n", "4", "--method", "both"]);
    assert_eq!(v["equal"], Value::Bool(true));
    assert_eq!(v["recipe"]["labels"].as_array().unwrap().len(), 3);
    assert_eq!(v["comparison"]["bijection"].as_array().unwrap().len(), 6);
}

#[test]
fn tailfan_2_4_has_six_cones() {
    let v = json_ok(&["tailfan", "--k", "2", "--n", "4"]);
    assert_eq!(v["fan"]["maximal_cones"].as_array().unwrap().len(), 6);
    assert_eq!(v["cones"], 6);
}

#[test]
fn ppdivisor_example_has_two_terms() {
    let w = data("weights_2_1.json");
    let v = json_ok(&["ppdivisor", "--weights", w.to_str().unwrap()]);
    let d = &v["divisor"];
    assert_eq!(d["terms"].as_array().unwrap().len(), 2);
    let mut rays: Vec<Vec<String>> = d["tail"]["rays"].as_array().unwrap().iter().map(strs).collect();
    rays.sort();
    assert_eq!(rays, vec![vec!["-1", "2"], vec!["1", "0"]]);
}

#[test]
fn ppdivisor_with_explicit_rays() {
    let dir = std::env::temp_dir().join(format!("fansy-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let rays = dir.join("rays.json");
    std::fs::write(&rays, r#"{"rays": [[1], [-1], [2]]}"#).unwrap();
    let w = data("weights_2_1.json");
    let v = json_ok(&["ppdivisor", "--weights", w.to_str().unwrap(), "--rays", rays.to_str().unwrap()]);
    assert_eq!(v["divisor"]["terms"].as_array().unwrap().len(), 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn setup_reports_sigma_and_degree_element() {
    let w = data("weights_2_1.json");
    let v = json_ok(&["setup", "--weights", w.to_str().unwrap()]);
    assert_eq!(v["pi"].as_array().unwrap().len(), 1);
    assert!(v["degree_element"].is_array());
    assert!(v["sigma"].is_object());
}

#[test]
fn projectivize_passes_structure_checks() {
    let w = data("p2_homogeneous.json");
    let v = json_ok(&["projectivize", "--weights", w.to_str().unwrap()]);
    assert_eq!(v["structure"]["pass"], Value::Bool(true));
    // the two charts of the repeated weight share a tail but not every coefficient
    assert_eq!(v["fansy"]["cells"].as_array().unwrap().len(), 4);
}

#[test]
fn subdivision_from_heights() {
    let w = data("p2_homogeneous.json");
    let v = json_ok(&["subdivision", "--weights", w.to_str().unwrap(), "--c", "1,0"]);
    let cells: Vec<&str> = v["subdivision"]["cells"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["label"].as_str().unwrap())
        .collect();
    assert_eq!(cells, vec!["{0,1,2}", "{1,2,3}"]);
}

#[test]
fn verify_and_localcheck_pass_at_4() {
    assert_eq!(json_ok(&["verify", "--n", "4"])["pass"], Value::Bool(true));
    assert_eq!(json_ok(&["localcheck", "--n", "4"])["pass"], Value::Bool(true));
}

#[test]
fn output_is_deterministic() {
    let a = fansy(&["fansy", "--n", "4"]).stdout;
    let b = fansy(&["fansy", "--n", "4"]).stdout;
    assert_eq!(a, b);
}

#[test]
fn bad_input_exits_with_2() {
    for args in [
        vec!["fansy", "--n", "7", "--method", "recipe"],
        vec!["setup", "--weights", "/nonexistent/weights.json"],
        vec!["tailfan", "--k", "2"],
        vec!["fansy", "--n", "4", "--method", "sideways"],
        vec!["localcheck", "--n", "3"],
    ] {
        let out = fansy(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn malformed_weights_exit_with_2() {
    let dir = std::env::temp_dir().join(format!("fansy-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cases = [
        r#"{"lattice_rank": 2, "weights": [[1, 0], [1]]}"#,
        r#"{"lattice_rank": 2}"#,
        r#"{"lattice_rank": 2, "weights": [[1, 0], [2, 0]]}"#,
        "not json",
    ];
    for (k, text) in cases.iter().enumerate() {
        let p = dir.join(format!("w{k}.json"));
        std::fs::write(&p, text).unwrap();
        let out = fansy(&["setup", "--weights", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{text}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn thread_cap_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_fansy"))
        .args(["tailfan", "--k", "2", "--n", "4"])
        .env("FANSY_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_fansy"))
        .args(["fansy", "--n", "4"])
        .env("FANSY_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, fansy(&["fansy", "--n", "4"]).stdout);
}
