use dgx_core::io;
use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn dgx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgx")).args(args).output().expect("dgx runs")
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("report is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dgx-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn indec_lists_six_objects() {
    let o = dgx(&["indec", &fixture("a2.json"), "-d", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert_eq!(r["results"]["count"], 6);
    assert_eq!(r["schema"], io::REPORT_SCHEMA);
    assert!(r.get("results").unwrap().get("timings_ms").is_none());
}

#[test]
fn window_from_document_or_flag() {
    let doc = dgx(&["indec", &fixture("a2.json")]);
    let flag = dgx(&["indec", &fixture("a2.json"), "-d", "1"]);
    assert_eq!(report(&doc)["results"]["count"], 6);
    assert_eq!(report(&flag)["results"]["count"], 3);
}

#[test]
fn reports_are_deterministic() {
    let a = dgx(&["ar", &fixture("gamma_example.json")]);
    let b = dgx(&["ar", &fixture("gamma_example.json")]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn gamma_then_auslander_reproduces_certificate() {
    let dir = scratch("gamma");
    let emitted = dir.join("gamma.json");
    let g = dgx(&["gamma", &fixture("a2.json"), "-d", "2", "--emit", emitted.to_str().unwrap()]);
    assert_eq!(g.status.code(), Some(0));
    let a = dgx(&["auslander", emitted.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    let (g, a) = (report(&g), report(&a));
    assert_eq!(serde_json::to_string(&g["results"]["auslander"]).unwrap(), serde_json::to_string(&a["results"]["auslander"]).unwrap());
    assert_eq!(a["results"]["auslander"]["gldim"]["value"], 2);
    assert_eq!(a["results"]["auslander"]["domdim_at_least_d_plus_1"], true);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn gamma_in_window_one_matches_fixture() {
    let o = dgx(&["gamma", &fixture("a2.json"), "-d", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let emitted = io::parse_document(std::str::from_utf8(&o.stdout).unwrap()).unwrap();
    let golden = io::parse_document(&std::fs::read_to_string(fixture("auslander_a2_d1.json")).unwrap()).unwrap();
    assert_eq!(emitted, golden);
}

#[test]
fn verdicts_map_to_exit_codes() {
    assert_eq!(dgx(&["auslander", &fixture("a2.json")]).status.code(), Some(1));
    assert_eq!(dgx(&["auslander", &fixture("auslander_a2_d1.json")]).status.code(), Some(0));
    let l = dgx(&["lambda", &fixture("a2.json")]);
    assert_eq!(l.status.code(), Some(1));
    assert_eq!(report(&l)["results"]["refused"], "not an Auslander algebra");
    assert_eq!(dgx(&["lambda", &fixture("auslander_a2_d1.json")]).status.code(), Some(0));
    assert_eq!(dgx(&["roundtrip", &fixture("a2.json"), "-d", "1"]).status.code(), Some(0));
    // Knitting a representation-infinite window stops at the bound.
    let dir = scratch("kronecker");
    let path = dir.join("kronecker.json");
    std::fs::write(
        &path,
        r#"{"field": "Q", "algebra": {"vertices": ["1", "2"], "arrows": [
            {"name": "a", "source": "1", "target": "2", "degree": 0},
            {"name": "b", "source": "1", "target": "2", "degree": 0}]}, "d": 1}"#,
    )
    .unwrap();
    let k = dgx(&["indec", path.to_str().unwrap(), "--max-objects", "12"]);
    assert_eq!(k.status.code(), Some(1));
    assert_eq!(report(&k)["results"]["status"], "aborted-at-bound");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn oracle_agrees_with_knitting() {
    let o = dgx(&["oracle", &fixture("a2.json"), "-d", "2", "--bound", "2", "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert_eq!(r["results"]["agree"], true);
    assert_eq!(r["results"]["census"], 6);
}

#[test]
fn input_errors_exit_two() {
    let bad = dgx(&["check", &fixture("a2_bad_h2.json")]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("h2"));
    assert_eq!(dgx(&["frobnicate", &fixture("a2.json")]).status.code(), Some(2));
    assert_eq!(dgx(&["check", &fixture("missing.json"), "-d", "1"]).status.code(), Some(2));
    assert_eq!(dgx(&["check", &fixture("a2.json"), "--field", "F4"]).status.code(), Some(2));
    let dir = scratch("errors");
    for (name, text) in [
        ("malformed.json", "{\"field\": \"Q\", "),
        ("empty.json", r#"{"field": "Q", "algebra": {"vertices": []}, "d": 1}"#),
        ("cycle.json", r#"{"field": "Q", "algebra": {"vertices": ["1"], "arrows": [{"name": "x", "source": "1", "target": "1", "degree": 0}]}, "d": 1}"#),
        ("nowindow.json", r#"{"field": "Q", "algebra": {"vertices": ["1"]}}"#),
    ] {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        assert_eq!(dgx(&["check", p.to_str().unwrap()]).status.code(), Some(2), "{name}");
    }
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn untruncated_algebras_need_reduce() {
    let dir = scratch("reduce");
    let p = dir.join("deep.json");
    std::fs::write(
        &p,
        r#"{"field": "Q", "algebra": {"vertices": ["1", "2"], "arrows": [{"name": "x", "source": "1", "target": "2", "degree": -2}]}, "d": 2}"#,
    )
    .unwrap();
    let plain = dgx(&["indec", p.to_str().unwrap()]);
    assert_eq!(plain.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&plain.stderr).contains("--reduce"));
    let reduced = dgx(&["indec", p.to_str().unwrap(), "--reduce"]);
    assert_eq!(reduced.status.code(), Some(0));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn prime_fields_agree_with_rationals() {
    for f in ["F2", "F5", "F2147483647"] {
        let o = dgx(&["indec", &fixture("gamma_example.json"), "--field", f]);
        assert_eq!(o.status.code(), Some(0), "{f}");
        let r = report(&o);
        assert_eq!(r["results"]["count"], 37, "{f}");
        assert_eq!(r["field"], f);
    }
}

#[test]
fn modules_are_presented_and_labelled() {
    let o = dgx(&["cohomology", &fixture("a2_modules.json")]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert_eq!(r["field"], "F7");
    let labels: Vec<&str> = r["results"]["modules"].as_array().unwrap().iter().map(|m| m["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["S1", "P1[1]"]);
}

#[test]
fn exports_dot_and_json() {
    let dot = dgx(&["export", &fixture("a2.json"), "--format", "dot"]);
    assert!(String::from_utf8_lossy(&dot.stdout).starts_with("digraph AR"));
    let json = dgx(&["export", &fixture("a2.json")]);
    let tq = dgx_core::arknit::TranslationQuiver::from_json(std::str::from_utf8(&json.stdout).unwrap()).unwrap();
    assert_eq!(tq.vertices.len(), 6);
    let timed = report(&dgx(&["check", &fixture("a2.json"), "--timings", "--seed", "7"]));
    assert!(timed["timings_ms"].is_u64());
    assert_eq!(timed["seed"], 7);
}
