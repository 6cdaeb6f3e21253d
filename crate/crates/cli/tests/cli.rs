use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn fwedge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fwedge")).args(args).output().expect("binary runs")
}

fn on(group: &str, args: &[&str]) -> Output {
    let path = fixture(group);
    let mut all = vec![args[0], path.to_str().unwrap()];
    all.extend_from_slice(&args[1..]);
    fwedge(&all)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eval_words_and_terms() {
    assert_eq!(stdout(&on("z2.json", &["eval", "--word", "x x"])), "e0\n");
    assert_eq!(stdout(&on("z2.json", &["eval", "--word", "x", "--model", "M"])), "(V={e0,e1}; E={(e0,x)}; g=e1)\n");
    assert_eq!(stdout(&on("z2.json", &["eval", "--term", "m(x)", "--model", "F"])), "(V={e0,e1}; E={}; g=e1)\n");
    let j = stdout(&on("z2.json", &["eval", "--word", "x", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&j).unwrap();
    assert_eq!(v["element"], "e1");
}

#[test]
fn enumerate_z2() {
    for (model, n) in [("M", "7"), ("F", "9"), ("Mwedge", "9")] {
        for by in ["graphs", "words"] {
            let o = on("z2.json", &["enumerate", "--model", model, "--by", by]);
            assert!(o.status.success(), "{model} {by}");
            assert_eq!(stdout(&o), format!("{n}\n"), "{model} {by}");
        }
    }
    let listed = stdout(&on("z2.json", &["enumerate", "--model", "M", "--list"]));
    assert_eq!(listed.lines().count(), 8);
}

#[test]
fn exit_codes() {
    assert_eq!(on("z2.json", &["eval", "--term", "m(x"]).status.code(), Some(2));
    assert_eq!(on("z2.json", &["eval", "--term", "m(x)", "--model", "M"]).status.code(), Some(3));
    assert_eq!(on("klein.json", &["enumerate", "--model", "MY"]).status.code(), Some(4));
    assert_eq!(on("z2.json", &["check", "--suite", "bogus"]).status.code(), Some(2));
    assert_eq!(on("missing.json", &["eval", "--word", "x"]).status.code(), Some(3));

    let dir = std::env::temp_dir().join(format!("fwedge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"name":"bad","elements":["e0","e1"],"table":[[0,1],[1,1]],"generators":{"x":1}}"#)
        .unwrap();
    let o = fwedge(&["eval", bad.to_str().unwrap(), "--word", "x"]);
    assert_eq!(o.status.code(), Some(3));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn dot_output() {
    let cay = stdout(&on("z2.json", &["dot", "--cayley"]));
    assert!(cay.starts_with("digraph \"Cay(Z2)\" {"));
    assert!(cay.contains("\"e0\" -> \"e1\" [label=\"x\"];"));
    assert!(cay.contains("\"e1\" -> \"e0\" [label=\"x\"];"));
    let origin = stdout(&on("z2.json", &["dot", "--word", ""]));
    assert_eq!(origin, "digraph \"(V={e0}; E={}; g=e0)\" {\n  \"e0\" [shape=doublecircle];\n}\n");
}

#[test]
fn check_z2_passes_and_is_deterministic() {
    let o = on("z2.json", &["check"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().all(|l| l.starts_with("PASS ")), "{text}");

    let a = on("z3.json", &["check", "--suite", "lemma31", "--format", "json", "--samples", "200", "--seed", "7"]);
    let b = on("z3.json", &["check", "--suite", "lemma31", "--format", "json", "--samples", "200", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v.as_array().unwrap().iter().all(|e| e["status"] == "pass"));
}
