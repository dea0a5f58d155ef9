use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn chowforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chowforge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_matroid(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn chow_poly_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_matroid(dir.path(), "u34.json", r#"{"type":"uniform","r":3,"n":4}"#);
    let o = chowforge(&["chow-poly", "--matroid", &m]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["results"]["coefficients"], serde_json::json!([1, 7, 1]));
    assert!(v["timings"]["ring"].is_u64());
}

#[test]
fn chi_of_the_uniform_example() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_matroid(dir.path(), "u38.json", r#"{"type":"uniform","r":3,"n":8}"#);
    let mut text = String::from("-(4*alpha");
    for i in 1..=4 {
        for j in 5..=8 {
            text += &format!(" - x{{{i},{j}}}");
        }
    }
    text.push(')');
    let o = chowforge(&["chi", "--matroid", &m, "--divisor", &text]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout_json(&o)["results"]["chi"], 3);
}

#[test]
fn dhr_params_inline() {
    let o = chowforge(&["dhr", "--matroid", r#"{"type":"uniform","r":3,"n":4}"#, "--params", "[[1,2],[3,4]]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["results"]["beta_positive"], true);
}

#[test]
fn out_file_is_byte_identical_without_timings() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_matroid(dir.path(), "b3.json", r#"{"type":"bases","n":4,"bases":[[1,2,3],[1,2,4],[1,3,4]]}"#);
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = chowforge(&["tangent", "--matroid", &m, "--no-timings", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        fs::read(out).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
}

#[test]
fn csv_scan_rows() {
    let o = chowforge(&[
        "kv-scan",
        "--matroid",
        r#"{"type":"uniform","r":3,"n":5}"#,
        "--params",
        r#"{"max": 4}"#,
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("matroid,divisor,property,value"));
    assert_eq!(lines.count(), 8);
}

#[test]
fn exit_codes() {
    let u34 = r#"{"type":"uniform","r":3,"n":4}"#;
    let code = |o: &Output| {
        let err: Value = serde_json::from_slice(&o.stderr).expect("stderr is JSON");
        (o.status.code(), err["error"]["code"].as_str().unwrap().to_string())
    };

    let o = chowforge(&["chi", "--matroid", u34, "--divisor", "2*alpha *"]);
    assert_eq!(code(&o), (Some(2), "PARSE".into()));

    let o = chowforge(&["chi", "--matroid", r#"{"type":"bases","n":3,"bases":[[1,2],[1,3]]}"#, "--divisor", "x{1,2}"]);
    assert_eq!(code(&o), (Some(2), "NOT_A_FLAT".into()));

    let o = chowforge(&["chow", "--matroid", r#"{"type":"uniform","r":4,"n":7}"#, "--limit", "50"]);
    assert_eq!(code(&o), (Some(3), "CAPACITY".into()));

    let o = chowforge(&["describe", "--matroid", r#"{"type":"bases","n":2,"bases":[[1]]}"#]);
    assert_eq!(o.status.code(), Some(2));

    let o = chowforge(&["identities", "--matroid", u34, "--params", r#"{"only":"nope"}"#]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn identity_suite_passes() {
    let o = chowforge(&["identities", "--matroid", r#"{"type":"uniform","r":2,"n":3}"#]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["results"]["passed"], true);
    assert!(v["results"]["identities"].as_array().unwrap().len() > 20);
}
