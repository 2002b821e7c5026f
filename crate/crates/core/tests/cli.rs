use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tricover::newick::parse_newick;

const WORKED_TREE: &str = "((a:1,b:1):1,c:1,(d:1,e:1):1);\n";
const WORKED_COVER: &str =
    r#"{"taxa":["a","b","c","d","e"],"cords":[["a","b"],["a","c"],["b","c"],["b","e"],["c","e"],["c","d"],["d","e"]]}"#;

fn tricover(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tricover"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn worked_dir() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("t.nwk"), WORKED_TREE).unwrap();
    fs::write(dir.path().join("c.json"), WORKED_COVER).unwrap();
    dir
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn analyze_worked() {
    let dir = worked_dir();
    let out = tricover(dir.path(), &["analyze", "--tree", "t.nwk", "--cover", "c.json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = stdout_json(&out);
    assert_eq!(r["is_cover"], true);
    assert_eq!(r["is_minimum"], true);
    assert_eq!(r["is_sparse"], true);
    assert_eq!(r["shelling"]["shellable"], true);
    assert_eq!(r["decomposition"]["blocks"], 1);
    assert_eq!(r["section_count"], "1");
}

#[test]
fn analyze_writes_identical_bytes() {
    let dir = worked_dir();
    for name in ["r1.json", "r2.json"] {
        let out = tricover(dir.path(), &["analyze", "--tree", "t.nwk", "--cover", "c.json", "--json", name]);
        assert!(out.status.success());
    }
    let a = fs::read(dir.path().join("r1.json")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("r2.json")).unwrap());
}

#[test]
fn non_cover_exit_two() {
    let dir = worked_dir();
    fs::write(
        dir.path().join("bad.json"),
        r#"{"taxa":["a","b","c","d","e"],"cords":[["a","b"],["a","c"],["b","c"],["c","e"],["c","d"],["d","e"]]}"#,
    )
    .unwrap();
    let out = tricover(dir.path(), &["analyze", "--tree", "t.nwk", "--cover", "bad.json"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("med("), "{err}");
}

#[test]
fn malformed_input_exit_one() {
    let dir = worked_dir();
    fs::write(dir.path().join("m.json"), "{\"taxa\": [").unwrap();
    let out = tricover(dir.path(), &["analyze", "--tree", "t.nwk", "--cover", "m.json"]);
    assert_eq!(out.status.code(), Some(1));
    let out = tricover(dir.path(), &["analyze", "--tree", "missing.nwk", "--cover", "c.json"]);
    assert_eq!(out.status.code(), Some(1));
    fs::write(dir.path().join("x.nwk"), "((a,b),c;").unwrap();
    let out = tricover(dir.path(), &["analyze", "--tree", "x.nwk", "--cover", "c.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn shell_then_verify() {
    let dir = worked_dir();
    let out = tricover(dir.path(), &["shell", "--tree", "t.nwk", "--cover", "c.json", "--out", "s.json"]);
    assert!(out.status.success());
    let out = tricover(
        dir.path(),
        &["verify-shelling", "--tree", "t.nwk", "--cover", "c.json", "--shelling", "s.json"],
    );
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_rejects_bad_order() {
    let dir = worked_dir();
    // bd first: neither (a,c) nor any other pair has all five cords yet
    fs::write(
        dir.path().join("s.json"),
        r#"{"steps":[{"cord":["b","d"],"witness_pair":["a","c"],"quartet":"ab|cd"},
                     {"cord":["a","e"],"witness_pair":["b","c"],"quartet":"ba|ce"},
                     {"cord":["a","d"],"witness_pair":["c","e"],"quartet":"ca|ed"}]}"#,
    )
    .unwrap();
    let out = tricover(
        dir.path(),
        &["verify-shelling", "--tree", "t.nwk", "--cover", "c.json", "--shelling", "s.json"],
    );
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn reconstruct_worked_and_perturbed() {
    let dir = worked_dir();
    let dist = r#"{"taxa":["a","b","c","d","e"],"distances":[
        ["a","b","2"],["a","c","3"],["b","c","3"],["b","e","4"],["c","e","3"],["c","d","3"],["d","e","2"]]}"#;
    fs::write(dir.path().join("d.json"), dist).unwrap();
    let out = tricover(dir.path(), &["reconstruct", "--cover", "c.json", "--dist", "d.json", "--out", "r.nwk"]);
    assert!(out.status.success());
    let text = fs::read_to_string(dir.path().join("r.nwk")).unwrap();
    assert_eq!(text, "(a:1,b:1,(c:1,(d:1,e:1):1):1);\n");

    fs::write(dir.path().join("p.json"), dist.replace(r#"["c","e","3"]"#, r#"["c","e","9"]"#)).unwrap();
    let out = tricover(dir.path(), &["reconstruct", "--cover", "c.json", "--dist", "p.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn reconstruct_three_taxa() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.json"), r#"{"taxa":["x","y","z"],"cords":[["x","y"],["x","z"],["y","z"]]}"#).unwrap();
    fs::write(
        dir.path().join("d.json"),
        r#"{"taxa":["x","y","z"],"distances":[["x","y","3"],["x","z","4"],["y","z","5"]]}"#,
    )
    .unwrap();
    let out = tricover(dir.path(), &["reconstruct", "--cover", "c.json", "--dist", "d.json"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "(x:1,y:2,z:3);\n");
}

#[test]
fn generate_is_reproducible_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for sub in ["g1", "g2"] {
        let out = tricover(
            dir.path(),
            &["generate", "--n", "7", "--seed", "1", "--cover-policy", "random", "--out-dir", sub],
        );
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for file in ["tree.nwk", "cover.json", "dist.json"] {
        assert_eq!(
            fs::read(dir.path().join("g1").join(file)).unwrap(),
            fs::read(dir.path().join("g2").join(file)).unwrap()
        );
    }
    let out = tricover(
        dir.path(),
        &["analyze", "--tree", "g1/tree.nwk", "--cover", "g1/cover.json"],
    );
    assert_eq!(stdout_json(&out)["is_cover"], true);
    let out = tricover(dir.path(), &["reconstruct", "--cover", "g1/cover.json", "--dist", "g1/dist.json"]);
    assert!(out.status.success());
    let original = parse_newick(&fs::read_to_string(dir.path().join("g1/tree.nwk")).unwrap()).unwrap();
    let rebuilt = parse_newick(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(original.is_isomorphic(&rebuilt, true).unwrap());
}

#[test]
fn generate_three_and_too_small() {
    let dir = tempfile::tempdir().unwrap();
    let out = tricover(dir.path(), &["generate", "--n", "3", "--out-dir", "g"]);
    assert!(out.status.success());
    let cover: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("g/cover.json")).unwrap()).unwrap();
    assert_eq!(cover["cords"].as_array().unwrap().len(), 3);
    let out = tricover(dir.path(), &["generate", "--n", "2", "--out-dir", "h"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn decompose_reports_blocks() {
    let dir = worked_dir();
    let out = tricover(dir.path(), &["decompose", "--tree", "t.nwk", "--cover", "c.json", "--all-sections"]);
    assert!(out.status.success());
    let r = stdout_json(&out);
    assert_eq!(r.as_array().unwrap().len(), 1);
    assert_eq!(r[0]["blocks"].as_array().unwrap().len(), 1);
    assert_eq!(r[0]["strict"], true);
    assert_eq!(r[0]["counting_identity"], true);
}

#[test]
fn capacity_flags_surface() {
    let dir = worked_dir();
    let out = tricover(
        dir.path(),
        &["analyze", "--tree", "t.nwk", "--cover", "c.json", "--hall-cap", "2", "--ample-cap", "2"],
    );
    assert!(out.status.success());
    let r = stdout_json(&out);
    assert_eq!(r["hall_type"], serde_json::Value::Null);
    assert_eq!(r["patchwork"]["verdict"], "indeterminate");
}

#[test]
fn fixtures_search_and_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = tricover(
        dir.path(),
        &["fixtures", "search", "--predicate", "minimum", "--min-n", "5", "--max-n", "5", "--store", "store"],
    );
    assert!(out.status.success());
    let out = tricover(dir.path(), &["fixtures", "check", "--store", "store"]);
    assert!(out.status.success());
    let listing = String::from_utf8(out.stdout).unwrap();
    assert!(listing.starts_with("ok   store/minimum/5/"), "{listing}");
}

#[test]
fn help_documents_formats() {
    let out = tricover(Path::new("."), &["--help"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("witness_pair") && text.contains("EXIT CODES"));
}
