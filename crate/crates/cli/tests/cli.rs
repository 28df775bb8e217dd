use std::process::{Command, Output};

use serde_json::Value;

fn shuffles(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shuffles"))
        .args(args)
        .env_remove("SHUFFLES_MAX_RANK")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = shuffles(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn flag_table_of_w21() {
    let v = json(&["flag", "--lower", "2", "--upper", "1", "--json"]);
    let row = v["rank_sets"].as_array().unwrap().iter().find(|r| r["set"] == serde_json::json!([1, 2])).unwrap();
    assert_eq!(row["alpha"], 12);
    assert_eq!(row["beta"], 3);
    let text = stdout(&shuffles(&["flag", "--lower", "2", "--upper", "1"]));
    assert!(text.contains("{1,2}"));
    assert!(text.contains("12 m[1,1,1]"));
}

#[test]
fn orbit_types_of_w21() {
    let v = json(&["orbits", "--lower", "2", "--upper", "1", "--json"]);
    let types: Vec<Value> = v["orbits"].as_array().unwrap().iter().map(|o| o["type"].clone()).collect();
    assert_eq!(types, vec![serde_json::json!([1, 1, 1]), serde_json::json!([2, 1]), serde_json::json!([2, 1])]);
    assert_eq!(v["chains"], 12);
    assert_eq!(v["orbits"][1]["shape"], "C3 x C2");
}

#[test]
fn zeta_and_mobius() {
    assert_eq!(stdout(&shuffles(&["zeta", "--lower", "1", "--upper", "1", "--k", "3"])), "12\n");
    assert_eq!(stdout(&shuffles(&["zeta", "-m", "1", "-n", "1", "-k", "-1"])), "2\n");
    assert_eq!(stdout(&shuffles(&["mobius", "-m", "2", "-n", "1"])), "-3\n");
}

#[test]
fn exit_codes() {
    assert_eq!(shuffles(&["build", "--lower", "1"]).status.code(), Some(2));
    assert_eq!(shuffles(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(shuffles(&["flag", "-m", "1", "-n", "1", "--format", "dot"]).status.code(), Some(2));
    assert_eq!(shuffles(&["build", "-m", "5", "-n", "4"]).status.code(), Some(3));
    let raised = Command::new(env!("CARGO_BIN_EXE_shuffles"))
        .args(["mobius", "-m", "5", "-n", "4"])
        .env("SHUFFLES_MAX_RANK", "9")
        .output()
        .unwrap();
    assert!(raised.status.success());
    assert_eq!(String::from_utf8(raised.stdout).unwrap(), "-126\n");
    let lowered = Command::new(env!("CARGO_BIN_EXE_shuffles"))
        .args(["mobius", "-m", "2", "-n", "1"])
        .env("SHUFFLES_MAX_RANK", "2")
        .output()
        .unwrap();
    assert_eq!(lowered.status.code(), Some(3));
}

#[test]
fn build_formats() {
    let v = json(&["build", "-m", "1", "-n", "1", "--json"]);
    assert_eq!(v["elements"].as_array().unwrap().len(), 5);
    assert_eq!(v["elements"][0]["word"], serde_json::json!(["a1"]));
    assert!(v["elements"].as_array().unwrap().iter().any(|e| e["word"] == serde_json::json!([])));
    let dot = stdout(&shuffles(&["build", "-m", "1", "-n", "1", "--format", "dot"]));
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("rank=same").count(), 3);
}

#[test]
fn chains_listing() {
    let v = json(&["chains", "-m", "2", "-n", "1", "--json", "--limit", "3"]);
    assert_eq!(v["total"], 12);
    assert_eq!(v["chains"].as_array().unwrap().len(), 3);
    let first = &v["chains"][0];
    assert_eq!(first["words"].as_array().unwrap().len(), 4);
    assert_eq!(first["labels"].as_array().unwrap().len(), 3);
}

#[test]
fn types_census() {
    let v = json(&["types", "-m", "1", "-n", "1", "--json"]);
    let types = v["types"].as_array().unwrap();
    assert_eq!(types.len(), 4);
    assert_eq!(types.iter().map(|t| t["count"].as_u64().unwrap()).sum::<u64>(), 5);
    assert!(types.iter().all(|t| t["count"] == t["formula"]));
}

#[test]
fn convolution_tables_round_trip() {
    let dir = std::env::temp_dir().join(format!("shuffles-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("zz.json");
    let out = shuffles(&[
        "convolve", "--f", "zeta", "--g", "zeta", "--trunc", "3,3", "--json", "--output", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["trunc"], serde_json::json!([3, 3]));
    assert_eq!(v["values"]["1,1"], "5");
    assert_eq!(v["values"]["1,2"], "12");

    // the written table is a valid input, and delta is neutral
    let again = json(&["convolve", "--f", path.to_str().unwrap(), "--g", "delta", "--trunc", "3,3", "--json"]);
    assert_eq!(again, v);

    let checked = shuffles(&["convolve", "--f", "random:3", "--g", "mu", "--trunc", "4,4", "--check", "4"]);
    assert!(checked.status.success());
    assert!(stdout(&checked).contains("agrees"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_deterministic() {
    let a = shuffles(&["orbits", "-m", "2", "-n", "2", "--json"]);
    let b = shuffles(&["orbits", "-m", "2", "-n", "2", "--json"]);
    assert_eq!(a.stdout, b.stdout);
    let a = shuffles(&["types", "-m", "2", "-n", "2"]);
    let b = shuffles(&["types", "-m", "2", "-n", "2"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_selected_criteria() {
    let out = shuffles(&["verify", "--criterion", "9", "--criterion", "6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().all(|l| l.contains("PASS")));
    assert_eq!(shuffles(&["verify", "--criterion", "12"]).status.code(), Some(2));
}
