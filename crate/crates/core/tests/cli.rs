use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn freelip(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freelip")).args(args).env_remove("FREELIP_EXACT").output().unwrap()
}

fn write(dir: &TempDir, name: &str, v: Value) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, serde_json::to_string(&v).unwrap()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn line_space(dir: &TempDir) -> PathBuf {
    write(dir, "space.json", json!({ "points": ["0", "1", "2"], "base": "0", "dist": [[0, 1, 2], [1, 0, 1], [2, 1, 0]] }))
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn norm_in_both_modes() {
    let dir = TempDir::new().unwrap();
    let space = line_space(&dir);
    let el = write(&dir, "el.json", json!({ "coeffs": { "1": 1, "2": -1 } }));
    let out = freelip(&["norm", "--space", s(&space), "--element", s(&el)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["exact"], json!(false));
    assert_eq!(r["seed"], json!(7));

    let out = freelip(&["--exact", "--seed", "11", "norm", "--space", s(&space), "--element", s(&el)]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["exact"], json!(true));
    assert_eq!(r["seed"], json!(11));
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn inline_space_is_accepted() {
    let dir = TempDir::new().unwrap();
    let el = write(
        &dir,
        "el.json",
        json!({ "space": { "points": ["a", "b"], "base": "a", "dist": [[0, 3], [3, 0]] }, "coeffs": { "b": 2 } }),
    );
    assert_eq!(freelip(&["norm", "--element", s(&el)]).status.code(), Some(0));
}

#[test]
fn swapped_pairs_are_not_monotone() {
    let dir = TempDir::new().unwrap();
    let space = line_space(&dir);
    let bad = write(&dir, "bad.json", json!({ "pairs": [["0", "1"], ["1", "0"]] }));
    let good = write(&dir, "good.json", json!({ "pairs": [["1", "0"], ["2", "1"]] }));
    let out = freelip(&["cm-check", "--space", s(&space), "--rep", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    let failed: Vec<&Value> = r["checks"].as_array().unwrap().iter().filter(|c| c["status"] == "fail").collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|c| !c["witness"].is_null()));
    assert_eq!(freelip(&["cm-check", "--space", s(&space), "--rep", s(&good)]).status.code(), Some(0));
}

#[test]
fn malformed_input_exits_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", json!({ "points": ["0", "1", "2"], "base": "0", "dist": [[0, 1, 3], [1, 0, 1], [3, 1, 0]] }));
    let el = write(&dir, "el.json", json!({ "coeffs": { "1": 1 } }));
    let out = freelip(&["norm", "--space", s(&bad), "--element", s(&el)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("triangle"));

    let garbage = dir.path().join("garbage.json");
    fs::write(&garbage, "{ not json").unwrap();
    assert_eq!(freelip(&["norm", "--element", s(&garbage)]).status.code(), Some(2));
    assert_eq!(freelip(&["norm", "--element", "/nonexistent/el.json"]).status.code(), Some(2));
    assert_eq!(freelip(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn dist_and_validate() {
    let dir = TempDir::new().unwrap();
    let space = line_space(&dir);
    let el = write(&dir, "el.json", json!({ "coeffs": { "1": 1 } }));
    let sub = write(&dir, "sub.json", json!(["2"]));
    assert_eq!(freelip(&["dist", "--space", s(&space), "--element", s(&el), "--subset", s(&sub)]).status.code(), Some(0));
    assert_eq!(freelip(&["validate", "--space", s(&space)]).status.code(), Some(0));
}

#[test]
fn tree_commands() {
    let dir = TempDir::new().unwrap();
    let tree = write(
        &dir,
        "tree.json",
        json!({ "root": "r", "edges": [{ "from": "r", "to": "a", "len": 1 }, { "from": "a", "to": "b", "len": 0.5 }] }),
    );
    let el = write(&dir, "el.json", json!({ "coeffs": { "a": 1, "b": -2 } }));
    let out = freelip(&["tree-norm", "--tree", s(&tree), "--element", s(&el), "--delta", "0.25"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = freelip(&["--exact", "equi-report", "--tree", s(&tree), "--element", s(&el)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn reports_are_written_atomically() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().join("reports");
    let out = freelip(&["--out", s(&out_dir), "limit-check", "star", "--N", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let names: Vec<String> = fs::read_dir(&out_dir).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    assert!(names.iter().any(|n| n.ends_with(".json")));
    let csv = names.iter().find(|n| n.ends_with(".csv")).expect("csv written");
    assert!(fs::read_to_string(out_dir.join(csv)).unwrap().starts_with("n,norm_sum,norm_bound,defect"));
    assert!(names.iter().all(|n| !n.ends_with(".tmp")));
}

#[test]
fn reproduce_is_deterministic() {
    let a = freelip(&["reproduce", "star", "--N", "5"]);
    let b = freelip(&["reproduce", "star", "--N", "5"]);
    assert_eq!(a.status.code(), Some(0));
    let strip = |o: &Output| {
        let mut v = report(o);
        v.as_object_mut().unwrap().remove("runtime_ms");
        v
    };
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(freelip(&["reproduce", "remark"]).status.code(), Some(0));
    assert_eq!(freelip(&["--exact", "reproduce", "dyadic", "--N", "4"]).status.code(), Some(0));
}

#[test]
fn exact_mode_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_freelip"))
        .args(["reproduce", "dyadic", "--N", "3"])
        .env("FREELIP_EXACT", "1")
        .output()
        .unwrap();
    assert_eq!(report(&out)["exact"], json!(true));
}
