use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fpair(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpair"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn json_of(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn feasible_exit_codes() {
    assert_eq!(code(&fpair(&["feasible", "6", "14", "48"])), 0);
    assert_eq!(code(&fpair(&["feasible", "6", "19", "57"])), 1);
    let bad = fpair(&["feasible", "2", "3", "3"]);
    assert_eq!(code(&bad), 2);
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("error:"));
}

#[test]
fn feasible_json() {
    let v = json_of(&fpair(&["feasible", "6", "19", "57", "--json"]));
    assert_eq!(v["status"], "infeasible");
    assert_eq!(v["query"]["f0"], 19);
}

#[test]
fn construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w");
    let o = fpair(&["construct", "6", "14", "48", "-o", path(&out), "--json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json_of(&o)["fpair"]["f1"], 48);
    for f in ["witness.json", "recipe.json", "certificate.json"] {
        assert!(out.join(f).exists(), "{f} missing");
    }
    let v = fpair(&["verify", path(&out.join("witness.json")), "--json"]);
    assert_eq!(code(&v), 0);
    let r = json_of(&v);
    assert_eq!(r["pass"], true);
    assert_eq!(
        (r["fpair"]["f0"].clone(), r["fpair"]["f1"].clone()),
        (14.into(), 48.into())
    );
}

#[test]
fn bundles_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        assert_eq!(code(&fpair(&["construct", "6", "14", "48", "-o", path(out)])), 0);
    }
    for f in ["witness.json", "recipe.json", "certificate.json"] {
        assert_eq!(
            std::fs::read(a.join(f)).unwrap(),
            std::fs::read(b.join(f)).unwrap(),
            "{f} differs"
        );
    }
}

#[test]
fn construct_refuses_infeasible_and_reports_unreached() {
    let dir = tempfile::tempdir().unwrap();
    let o = fpair(&["construct", "6", "10", "34", "-o", path(&dir.path().join("x"))]);
    assert_eq!(code(&o), 1);
    assert!(!dir.path().join("x").exists());
    let o = fpair(&[
        "construct",
        "6",
        "35",
        "107",
        "-o",
        path(&dir.path().join("y")),
        "--budget",
        "2",
        "--json",
    ]);
    assert_eq!(code(&o), 1);
    assert!(json_of(&o)["moves"].is_array());
}

#[test]
fn verify_names_redundant_points() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p.json");
    // unit square pyramid with the midpoint of a base edge added
    let poly = r#"{"dimension": 3, "vertices": [["0","0","0"],["1","0","0"],["1","1","0"],["0","1","0"],["1/2","1/2","1"],["1/2","0","0"]]}"#;
    std::fs::write(&file, poly).unwrap();
    let o = fpair(&["verify", path(&file)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("point 5 is not a vertex"));
    let r = json_of(&fpair(&["verify", path(&file), "--json"]));
    assert_eq!(r["redundant"], serde_json::json!([5]));
    assert_eq!(r["pass"], false);

    std::fs::write(&file, "{not json").unwrap();
    assert_eq!(code(&fpair(&["verify", path(&file)])), 2);
}

#[test]
fn dual_and_fvector() {
    let dir = tempfile::tempdir().unwrap();
    let cube = dir.path().join("cube.json");
    let mut verts = Vec::new();
    for i in 0..8 {
        let c: Vec<String> = (0..3).map(|b| format!("\"{}\"", 2 * (i >> b & 1) - 1)).collect();
        verts.push(format!("[{}]", c.join(",")));
    }
    std::fs::write(
        &cube,
        format!(r#"{{"dimension": 3, "vertices": [{}]}}"#, verts.join(",")),
    )
    .unwrap();
    let f = json_of(&fpair(&["fvector", path(&cube), "--json"]));
    assert_eq!(f["fvector"], serde_json::json!([8, 12, 6]));
    let oct = dir.path().join("oct.json");
    let d = fpair(&["dual", path(&cube), "-o", path(&oct), "--json"]);
    assert_eq!(code(&d), 0);
    assert_eq!(json_of(&d)["vertices"], 6);
    let plain = fpair(&["fvector", path(&oct)]);
    assert_eq!(String::from_utf8_lossy(&plain.stdout).trim(), "(6, 12, 8)");
}

#[test]
fn table_lists_the_exclusions() {
    let o = fpair(&["table", "6", "--f0-max", "25", "--json"]);
    assert_eq!(code(&o), 0);
    let t = json_of(&o);
    let infeasible = t["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["verdict"]["status"] == "infeasible")
        .count();
    assert_eq!(infeasible, 37);
    let text = String::from_utf8_lossy(&fpair(&["table", "5", "--f0-max", "9"]).stdout).to_string();
    assert!(text.contains("(9, 25)  infeasible"));
    assert_eq!(code(&fpair(&["table", "9", "--f0-max", "12"])), 2);
}
