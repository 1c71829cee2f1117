use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unmixed")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn fixture_dir() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["fixtures", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    dir
}

fn graded(v: &Value) -> Vec<(u64, u64, u64)> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|e| (e["i"].as_u64().unwrap(), e["j"].as_u64().unwrap(), e["value"].as_u64().unwrap()))
        .collect()
}

#[test]
fn analyze_chain_with_oracle() {
    let dir = fixture_dir();
    let input = dir.path().join("CHAIN.lattice");
    let o = run(&["analyze", "--input", input.to_str().unwrap(), "--level", "oracle", "--format", "json", "--no-timestamp"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_out(&o);
    assert_eq!(v["report"]["depth_RI"], 2);
    assert_eq!(v["report"]["reg_RI"], 1);
    assert_eq!(v["report"]["pd_RI"], 2);
    assert_eq!(v["oracle"]["verdict"], "MATCH");
    assert!(v.get("timestamp").is_none());
}

#[test]
fn analyze_k22_graph() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "k22.graph", "graph 2 2\n1 1\n1 2\n2 1\n2 2\n");
    let v = json_out(&run(&["analyze", "--input", &input, "--format", "json"]));
    assert_eq!(v["source"], "graph");
    assert_eq!((v["report"]["depth_RI"].clone(), v["report"]["reg_RI"].clone(), v["report"]["pd_RI"].clone()), (1.into(), 1.into(), 3.into()));
    assert_eq!(graded(&v["report"]["extremal_RI_graded"]), vec![(3, 4, 1)]);
    assert!(v.get("timestamp").is_some());
}

#[test]
fn analyze_fig1_formulas() {
    let dir = fixture_dir();
    let input = dir.path().join("FIG1.lattice");
    let v = json_out(&run(&["analyze", "--input", input.to_str().unwrap(), "--format", "json"]));
    assert_eq!(v["report"]["pd_RI"], 8);
    assert_eq!(graded(&v["report"]["extremal_RI_graded"]), vec![(8, 10, 2)]);

    let text = run(&["analyze", "--input", input.to_str().unwrap()]);
    let text = String::from_utf8(text.stdout).unwrap();
    assert!(text.contains("beta_8,10 = 2"), "{text}");
}

#[test]
fn analyze_text_marks_corners() {
    let dir = fixture_dir();
    let input = dir.path().join("B2.graph");
    let o = run(&["analyze", "--input", input.to_str().unwrap(), "--level", "oracle"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("oracle verdict: MATCH"), "{text}");
    assert!(text.contains("1*"), "{text}");
}

#[test]
fn invalid_inputs_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.lattice", "lattice 2\nempty\n1\n2\n");
    let o = run(&["verify", "--input", &bad]);
    assert_eq!(code(&o), 1);
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "NotClosed");

    let mixed = write(dir.path(), "mixed.graph", "graph 3 3\n1 1\n2 2\n3 3\n1 2\n2 3\n");
    let o = run(&["analyze", "--input", &mixed]);
    assert_eq!(code(&o), 1);
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "NotUnmixed");

    let star = write(dir.path(), "star.graph", "graph 1 2\n1 1\n1 2\n");
    let o = run(&["analyze", "--input", &star]);
    assert_eq!(code(&o), 1);
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "NoPerfectMatching");

    let o = run(&["analyze", "--input", dir.path().join("missing").to_str().unwrap()]);
    assert_eq!(code(&o), 1);
}

#[test]
fn verify_fixtures_and_directory() {
    let o = run(&["verify", "--level", "oracle"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("5 instance(s), oracle matches: 5"));
    assert!(!text.contains("FAIL"));

    let dir = fixture_dir();
    let o = run(&["verify", "--input", dir.path().to_str().unwrap(), "--format", "json", "--no-timestamp"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json_out(&o)["summary"]["instances"], 10);
}

#[test]
fn mutation_is_caught() {
    let o = run(&["verify", "--debug-mutate"]);
    assert_eq!(code(&o), 2);
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["mismatch"]["property"], "d_squared_zero");
    // E1 comes first and only has a first differential
    assert_eq!(err["mismatch"]["counterexample"]["detail"]["kind"], "augmentation");

    let dir = fixture_dir();
    let b2 = dir.path().join("B2.lattice");
    let o = run(&["verify", "--debug-mutate", "--input", b2.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    let detail = &err["mismatch"]["counterexample"]["detail"];
    assert_eq!(detail["kind"], "d^2");
    assert_eq!(detail["source"]["p"], serde_json::json!([1, 2]));
    assert_eq!(detail["target"]["p"], serde_json::json!([2]));
}

#[test]
fn random_n5_matches() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r");
    let o = run(&[
        "random", "--n", "5", "--count", "200", "--seed", "42", "--level", "oracle", "--format", "json",
        "--no-timestamp", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_out(&o);
    assert_eq!(v["summary"]["instances"], 200);
    assert_eq!(v["summary"]["oracle_matches"], 200);
    assert_eq!(fs::read_dir(out.join("instances")).unwrap().count(), 200);
    assert_eq!(fs::read_to_string(out.join("reports.jsonl")).unwrap().lines().count(), 200);
}

#[test]
fn random_small_and_empty() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r");
    let o = run(&["random", "--n", "3", "--count", "10", "--seed", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    for entry in fs::read_dir(out.join("instances")).unwrap() {
        let path = entry.unwrap().path();
        let o = run(&["analyze", "--input", path.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
    }
    let o = run(&["random", "--n", "3", "--count", "0", "--format", "json", "--no-timestamp"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json_out(&o)["summary"]["instances"], 0);
}

#[test]
fn output_is_deterministic() {
    let args = ["random", "--n", "4", "--count", "25", "--seed", "3", "--level", "oracle", "--format", "json", "--no-timestamp"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["random", "--n", "4", "--count", "25", "--seed", "3", "--format", "json", "--no-timestamp", "--jobs", "1"]);
    let d = run(&["random", "--n", "4", "--count", "25", "--seed", "3", "--format", "json", "--no-timestamp", "--jobs", "4"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn tightness_search() {
    let o = run(&["search-tightness", "--fixtures", "--format", "json", "--no-timestamp"]);
    assert_eq!(code(&o), 0);
    let v = json_out(&o);
    assert_eq!(v["summary"]["instances"], 5);
    assert_eq!(v["summary"]["violations"], 0);

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t");
    let o = run(&["search-tightness", "--n", "4", "--count", "100", "--seed", "7", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let findings = fs::read_to_string(out.join("findings.jsonl")).unwrap();
    for line in findings.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["strict"], true);
    }
    let all: Value = serde_json::from_str(&fs::read_to_string(out.join("tightness.json")).unwrap()).unwrap();
    assert_eq!(all["all"].as_array().unwrap().len(), 100);

    let empty = dir.path().join("empty");
    fs::create_dir(&empty).unwrap();
    let out = dir.path().join("e");
    let o = run(&["search-tightness", "--input", empty.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read_to_string(out.join("findings.jsonl")).unwrap(), "");
}

#[test]
fn fixtures_json_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["fixtures", "--out", dir.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&o), 0);
    let fig1 = dir.path().join("FIG1.lattice.json");
    let v: Value = serde_json::from_str(&fs::read_to_string(&fig1).unwrap()).unwrap();
    assert_eq!(v["n"], 7);
    assert_eq!(v["elements"].as_array().unwrap().len(), 10);
    let o = run(&["analyze", "--input", fig1.to_str().unwrap(), "--format", "json"]);
    assert_eq!(json_out(&o)["report"]["depth_RI"], 6);
}

#[test]
fn oracle_refuses_large_n() {
    let o = run(&["random", "--n", "8", "--count", "1", "--level", "oracle"]);
    assert_eq!(code(&o), 1);
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "OracleTooLarge");
}
