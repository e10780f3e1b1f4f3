use std::path::PathBuf;
use std::process::{Command, Output};

use regex::Regex;
use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn rct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rct")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn reference() -> [String; 2] {
    [fixture("reference_library.json"), fixture("region_8x3.json")]
}

#[test]
fn validate_reference() {
    let [lib, fp] = reference();
    let out = rct(&["validate", "--library", &lib, "--floorplan", &fp]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("ok: 24 nodes, 3 branches"));
}

#[test]
fn hole_is_a_model_violation() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(fixture("small_3x2.json")).unwrap()).unwrap();
    doc["placements"].as_array_mut().unwrap().pop();
    let path = dir.path().join("hole.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let out = rct(&[
        "validate",
        "--library",
        &fixture("small_library.json"),
        "--floorplan",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("uncovered cell (2, 1)"));
}

#[test]
fn io_and_schema_errors_exit_2() {
    let [lib, _] = reference();
    let out = rct(&["validate", "--library", &lib, "--floorplan", "/nonexistent/plan.json"]);
    assert_eq!(out.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ \"cols\": ").unwrap();
    let out = rct(&["validate", "--library", &lib, "--floorplan", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = rct(&["optimize", "--library", &lib, "--floorplan", &fixture("region_8x3.json"), "--method", "oracle"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn chain_local_and_global() {
    let (lib, fp) = (fixture("chain_library.json"), fixture("chain_3x1.json"));
    let base = ["optimize", "--library", &lib, "--floorplan", &fp, "--objective", "l", "--format", "json"];
    let local = json(&rct(&[&base[..], &["--method", "local"]].concat()));
    assert_eq!(local["assignment"], serde_json::json!([6, 3, 1]));
    assert_eq!(local["cost"]["fs"], 50_000);
    let global = json(&rct(&[&base[..], &["--method", "global"]].concat()));
    assert_eq!(global["cost"], local["cost"]);
}

#[test]
fn oracle_guard_exits_3_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("out.json");
    let out = rct(&[
        "optimize",
        "--library",
        &fixture("small_library.json"),
        "--floorplan",
        &fixture("small_3x2.json"),
        "--method",
        "oracle",
        "--oracle-limit",
        "10",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("search guard"));
    assert!(!out_path.exists());
}

#[test]
fn svg_has_every_branch_and_node() {
    let [lib, fp] = reference();
    let out = rct(&["render", "--library", &lib, "--floorplan", &fp, "--format", "svg", "--assignment", "local"]);
    assert!(out.status.success());
    let svg = String::from_utf8(out.stdout).unwrap();
    assert_eq!(svg.matches("class=\"branch\"").count(), 3);
    assert_eq!(svg.matches("class=\"annotated-node\"").count(), 24);
    assert_eq!(svg.matches("class=\"block\"").count(), 24);
}

#[test]
fn dot_round_trips_edges() {
    let [lib, fp] = reference();
    let out = rct(&["render", "--library", &lib, "--floorplan", &fp, "--format", "dot"]);
    let dot = String::from_utf8(out.stdout).unwrap();
    let edge = Regex::new(r"n(\d+) -> n(\d+) \[label=").unwrap();
    let edges: Vec<(u32, u32)> = edge
        .captures_iter(&dot)
        .map(|c| (c[1].parse().unwrap(), c[2].parse().unwrap()))
        .collect();
    assert_eq!(edges.len(), 23);
    let mut children: Vec<u32> = edges.iter().map(|e| e.1).collect();
    children.sort_unstable();
    assert_eq!(children, (2..=24).collect::<Vec<_>>());
    assert!(edges.iter().all(|&(p, c)| p < c));
}

#[test]
fn single_block_has_no_edges_and_zero_skew() {
    let dir = tempfile::tempdir().unwrap();
    let fp = dir.path().join("one.json");
    std::fs::write(
        &fp,
        r#"{"cols":1,"rows":1,"placements":[["cell",0,0]],"entry_corner":"top_left","corner_of_record":"TT"}"#,
    )
    .unwrap();
    let lib = fixture("chain_library.json");
    let dot = rct(&["render", "--library", &lib, "--floorplan", fp.to_str().unwrap(), "--format", "dot"]);
    assert!(dot.status.success());
    assert!(!String::from_utf8_lossy(&dot.stdout).contains("->"));
    let a = json(&rct(&["analyze", "--library", &lib, "--floorplan", fp.to_str().unwrap(), "--format", "json"]));
    assert_eq!(a["corners"]["TT"]["cost"]["max_pairwise_diff"]["fs"], 0);
}

#[test]
fn all_ones_skew_is_max_natural() {
    let [lib, fp] = reference();
    let a = json(&rct(&[
        "analyze", "--library", &lib, "--floorplan", &fp, "--assignment", "ones", "--format", "json",
    ]));
    for c in a["corners"].as_object().unwrap().values() {
        assert_eq!(c["cost"]["max_pairwise_diff"]["fs"], c["feasibility"]["max_natural"]["fs"]);
    }
}

#[test]
fn infeasible_region_lists_offenders() {
    let [lib, fp] = reference();
    let out = rct(&["feasibility", "--library", &lib, "--floorplan", &fp, "--format", "json"]);
    let f = json(&out);
    let bc = &f["corners"]["BC"];
    assert_eq!(bc["feasible"], false);
    assert_eq!(bc["margin"]["fs"], -17_000);
    assert_eq!(bc["offending"], serde_json::json!([1]));
}

#[test]
fn meta_sidecar_is_separate() {
    let dir = tempfile::tempdir().unwrap();
    let meta = dir.path().join("meta.json");
    let [lib, fp] = reference();
    let args = ["optimize", "--library", &lib, "--floorplan", &fp, "--format", "json"];
    let plain = rct(&args);
    let with_meta = rct(&[&args[..], &["--meta", meta.to_str().unwrap()]].concat());
    assert_eq!(plain.stdout, with_meta.stdout);
    let m: Value = serde_json::from_str(&std::fs::read_to_string(&meta).unwrap()).unwrap();
    assert_eq!(m["command"], "optimize");
    assert!(json(&plain).get("elapsed_ms").is_none());
}
