use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn graph(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../graphs").join(format!("{name}.sgr"))
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sepgraph")).args(args).output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = if stdout.is_empty() { Value::Null } else { serde_json::from_str(&stdout).expect("JSON on stdout") };
    (out.status.code().unwrap(), json, String::from_utf8(out.stderr).unwrap())
}

fn path(name: &str) -> String {
    graph(name).to_string_lossy().into_owned()
}

#[test]
fn check_n_fails_on_emn_with_a_verified_witness() {
    let (code, r, _) = run(&["check-n", &path("emn_2_3"), "--witness"]);
    assert_eq!(code, 1);
    assert_eq!(r["command"], "check-n");
    assert_eq!(r["graph"]["edges"], 5);
    assert_eq!(r["payload"]["verdict"], false);
    assert_eq!(r["payload"]["witness"]["verified"], true);
    assert_eq!(r["payload"]["witness"]["vertex"], "u");
}

#[test]
fn check_n_passes_on_the_running_example() {
    let (code, r, _) = run(&["check-n", &path("running_example")]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["verdict"], true);
    assert_eq!(r["payload"]["branching"].as_array().unwrap().len(), 4);
    assert!(r["payload"].get("witness").is_none());
}

#[test]
fn validate_accepts_the_catalog() {
    for name in ["two_squares", "running_example", "free_2"] {
        let (code, r, _) = run(&["validate", &path(name)]);
        assert_eq!(code, 0, "{name}");
        assert_eq!(r["payload"]["verdict"], true);
    }
}

#[test]
fn input_errors_exit_two() {
    let dir = std::env::temp_dir().join(format!("sepgraph-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.sgr");
    std::fs::write(&bad, "vertex u\nedge e : u -> nowhere @ c\n").unwrap();
    let bad = bad.to_string_lossy().into_owned();
    assert_eq!(run(&["validate", &bad]).0, 2);
    assert_eq!(run(&["validate", "/nonexistent/graph.sgr"]).0, 2);
    assert_eq!(run(&["check-n", &path("loop"), "--frobnicate"]).0, 2);
    assert_eq!(run(&["dynamics", &path("emn_2_2"), "--at", "u", "--act", "e0.zz"]).0, 2);
    assert_eq!(run(&["monoid", &path("two_squares"), "--check", "cancellativity"]).0, 2);
    let (code, _, err) = run(&["dynamics", &path("emn_2_2"), "--at", "u", "--act", "e0.e0"]);
    assert_eq!(code, 2);
    assert!(err.contains("e0.e0"), "{err}");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn analyze_reports_local_orientation_types() {
    let (code, r, _) = run(&["analyze", &path("running_example")]);
    assert_eq!(code, 0);
    let rows = r["payload"]["vertices"].as_array().unwrap();
    let types: Vec<(&str, &str)> = rows
        .iter()
        .filter(|v| v["branching"] == true)
        .map(|v| (v["vertex"].as_str().unwrap(), v["local_orientation"]["type"].as_str().unwrap()))
        .collect();
    assert_eq!(types, [("u11", "2"), ("u2", "2"), ("u3", "1"), ("u7", "2")]);
}

#[test]
fn decompose_lists_parts_strata_and_edge_types() {
    let (code, r, _) = run(&["decompose", &path("running_example")]);
    assert_eq!(code, 0);
    let p = &r["payload"];
    assert_eq!(p["subgraphs"]["branching"].as_array().unwrap().len(), 9);
    assert_eq!(p["subgraphs"]["branch_free"], serde_json::json!(["u13", "u4", "u5", "u9"]));
    assert_eq!(p["strata"], serde_json::json!([["u13", "u4", "u9"], ["u5"]]));
    assert_eq!(p["edge_types"]["b2_3"], "2");
    assert_eq!(p["edge_types"]["g1_10"], "3a");
    assert_eq!(p["edge_types"]["b6_1"], "3b");
}

#[test]
fn synthesized_orientation_verifies_as_proper() {
    let (code, r, _) = run(&["orient", &path("double_loop"), "--synthesize"]);
    assert_eq!(code, 0);
    assert_eq!(r["payload"]["verdict"], "proper");
    let dir = std::env::temp_dir().join(format!("sepgraph-orient-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("o.txt");
    std::fs::write(&file, r["payload"]["text"].as_str().unwrap()).unwrap();
    let (code, v, _) = run(&["orient", &path("double_loop"), "--verify", &file.to_string_lossy()]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["verdict"], "proper");
    assert_eq!(v["payload"]["orientation"], r["payload"]["orientation"]);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn synthesis_fails_with_witness_without_condition_n() {
    let (code, r, _) = run(&["orient", &path("emn_2_2"), "--synthesize"]);
    assert_eq!(code, 1);
    assert_eq!(r["payload"]["verdict"], "invalid");
    assert_eq!(r["payload"]["witness"]["verified"], true);
}

#[test]
fn orient_needs_a_mode() {
    assert_eq!(run(&["orient", &path("loop")]).0, 2);
}

#[test]
fn dynamics_counts_depth_one_patterns() {
    for (name, count) in [("emn_2_2", 4), ("emn_2_3", 6)] {
        let (code, r, _) = run(&["dynamics", &path(name), "--depth", "1", "--at", "w"]);
        assert_eq!(code, 0);
        assert_eq!(r["payload"]["count"], count, "{name}");
        assert_eq!(r["payload"]["patterns"].as_array().unwrap().len(), count);
    }
}

#[test]
fn dynamics_acts_and_builds_folner_sets() {
    let (code, r, _) = run(&["dynamics", &path("emn_2_2"), "--at", "u", "--act", "f0^-1.e0", "--depth", "3"]);
    assert_eq!(code, 0);
    let pats = r["payload"]["patterns"].as_array().unwrap();
    assert!(pats[0].as_str().unwrap().starts_with("pattern u depth 3\n"));
    assert!(pats[1].as_str().unwrap().starts_with("pattern u depth 1\n"));

    let dir = std::env::temp_dir().join(format!("sepgraph-folner-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("loop.or");
    std::fs::write(&file, "orient e -1\n").unwrap();
    let (code, r, _) =
        run(&["dynamics", &path("loop"), "--folner", "8", "--orientation", &file.to_string_lossy()]);
    assert_eq!(code, 0);
    let f = &r["payload"]["folner"];
    assert_eq!(f["members"].as_array().unwrap().len(), 8);
    for ratio in f["ratios"].as_object().unwrap().values() {
        assert!(ratio["ratio"].as_f64().unwrap() <= ratio["bound"].as_f64().unwrap() + 1e-12);
    }
    assert_eq!(run(&["dynamics", &path("loop"), "--folner", "8"]).0, 2);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn dynamics_stabilizer_witness_verifies() {
    let (code, r, _) = run(&["dynamics", &path("emn_2_2"), "--stabilizer-witness", "--depth", "8"]);
    assert_eq!(code, 0);
    let w = &r["payload"]["witness"];
    assert_eq!(r["payload"]["verdict"], true);
    assert_eq!((w["valid"].clone(), w["fixed"].clone(), w["free"].clone()), (true.into(), true.into(), true.into()));
}

#[test]
fn monoid_reports_counterexamples() {
    let (code, r, _) = run(&["monoid", &path("two_squares"), "--check", "unperforation", "--bound", "8"]);
    assert_eq!(code, 0);
    let c = &r["payload"]["monoid"]["checks"]["unperforation"];
    assert_eq!(c["verdict"], "false");
    assert_eq!(c["counterexample"], serde_json::json!({"n": 2, "a": "u", "b": "v"}));

    let (_, r, _) = run(&["monoid", &path("free_2"), "--bound", "8"]);
    for (name, c) in r["payload"]["monoid"]["checks"].as_object().unwrap() {
        assert_eq!(c["verdict"], "true", "{name}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["decompose", &path("running_example")];
    let a = Command::new(env!("CARGO_BIN_EXE_sepgraph")).args(args).output().unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_sepgraph")).args(args).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
}
