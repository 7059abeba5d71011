//! Black-box tests of the binary: flag handling, exit codes, and the
//! determinism contract on JSON output.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_prolongkit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_temp(name: &str, contents: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("prolongkit_cli_test_{name}"));
    std::fs::write(&path, contents).unwrap();
    path
}

const FERMAT3: &str = r#"{"dim": 3, "monomials": [
  {"exps": [3,0,0], "coeff": "1"},
  {"exps": [0,3,0], "coeff": "1"},
  {"exps": [0,0,3], "coeff": "1"}
]}"#;

#[test]
fn analyze_catalog_veronese() {
    let out = run(&["analyze", "--catalog", "veronese", "--samples", "4"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["aut"]["dim"], 9);
    assert_eq!(v["prolongation"]["dim"], 6);
    assert_eq!(v["prolongation"]["chi_rank"], 6);
    let cls = v["classification"].as_array().unwrap();
    assert_eq!(cls.len(), 6);
    assert!(cls.iter().all(|c| c["member"] == true && c["a"] == "1/2"));
    assert!(v["catalog_expectations"]
        .as_array()
        .unwrap()
        .iter()
        .all(|e| e["pass"] == true));
    // the stable per-sample record keys
    let sample = &v["gauss"]["samples"][0];
    for key in ["point", "dim_null", "dim_gamma", "on_Y", "singular"] {
        assert!(sample.get(key).is_some(), "missing key {key}");
    }
}

#[test]
fn analyze_is_byte_deterministic() {
    let args = ["analyze", "--catalog", "segre", "--samples", "5", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn analyze_file_cubic() {
    let path = write_temp("fermat3.json", FERMAT3);
    let out = run(&["analyze", "--cubic", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["aut"]["dim"], 1);
    assert_eq!(v["prolongation"]["dim"], 0);
    assert_eq!(v["prolongation"]["naive_agrees"], true);
}

#[test]
fn analyze_skip_prolongation() {
    let out = run(&[
        "analyze",
        "--catalog",
        "veronese",
        "--skip-prolongation",
        "--samples",
        "2",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v.get("prolongation").is_none());
}

#[test]
fn analyze_emit_cubic_round_trips() {
    let target = std::env::temp_dir().join("prolongkit_cli_test_emitted.json");
    let out = run(&[
        "analyze",
        "--catalog",
        "veronese",
        "--samples",
        "1",
        "--emit-cubic",
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&target).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["dim"], 6);
    assert!(!v["tensor"].as_array().unwrap().is_empty());
    // the emitted tensor file is accepted back as input
    let out = run(&[
        "analyze",
        "--cubic",
        target.to_str().unwrap(),
        "--samples",
        "1",
        "--skip-prolongation",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["aut"]["dim"], 9);
}

#[test]
fn malformed_json_exits_1() {
    let path = write_temp("bad.json", "{not json");
    let out = run(&["analyze", "--cubic", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    // a diagnostic naming the offending monomial record
    let path = write_temp(
        "bad_monomial.json",
        r#"{"dim": 2, "monomials": [
            {"exps": [3,0], "coeff": "1"},
            {"exps": [1,1], "coeff": "1"}
        ]}"#,
    );
    let out = run(&["analyze", "--cubic", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("monomial #1"), "{}", stderr(&out));
}

#[test]
fn analyze_missing_input_exits_2() {
    let out = run(&["analyze"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_veronese_passes() {
    let out = run(&["verify-severi", "veronese"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("aut_dim_solver"));
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL ") && !text.contains("FAILURES"));
}

#[test]
fn verify_all_skips_octonion_by_default() {
    let out = run(&[
        "verify-severi",
        "all",
        "--skip",
        "segre",
        "--skip",
        "grassmannian",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 1);
    assert_eq!(entries[0]["entry"], "veronese");
    assert_eq!(v["pass"], true);
    // the `all` run includes the arithmetic rows
    assert!(!v["arithmetic"].as_array().unwrap().is_empty());
}

#[test]
fn verify_bogus_exits_2() {
    let out = run(&["verify-severi", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tables_segre_sweep() {
    let out = run(&["tables", "I", "--a", "3..5", "--b", "3..5", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 9);
    let hyper: Vec<&&str> = rows.iter().filter(|r| r.contains("true")).collect();
    assert_eq!(hyper.len(), 1);
    assert!(hyper[0].contains("a=3 b=3"));
}

#[test]
fn tables_veronese_sweep() {
    let out = run(&["tables", "III", "--n", "3..6", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let hyper: Vec<&str> = text
        .lines()
        .skip(1)
        .filter(|r| r.contains("true"))
        .collect();
    assert_eq!(hyper.len(), 1);
    assert!(hyper[0].contains("n=3"));
}

#[test]
fn tables_symplectic_family_has_no_hypersurfaces() {
    let out = run(&[
        "tables", "ii", "--k", "2..4", "--m", "1..4", "--format", "csv",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).lines().skip(1).all(|r| r.contains("false")));
}

#[test]
fn tables_submaximal_columns() {
    let out = run(&[
        "tables",
        "I",
        "--a",
        "3..5",
        "--b",
        "3..5",
        "--check-submaximal",
        "1",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().next().unwrap().contains("dim_L_required"));
    // the Severi point has no submaximal center; everything else is
    // inconsistent with a nonzero prolongation after projection
    for line in text.lines().skip(1) {
        if line.contains("a=3 b=3") {
            assert!(line.contains("n/a"));
        } else {
            assert!(line.ends_with(",false"), "{line}");
        }
    }
}

#[test]
fn tables_bad_params_exit_2() {
    assert_eq!(run(&["tables", "I"]).status.code(), Some(2));
    assert_eq!(run(&["tables", "Z", "--n", "3..4"]).status.code(), Some(2));
    assert_eq!(
        run(&["tables", "III", "--n", "9..3"]).status.code(),
        Some(2)
    );
}

#[test]
fn thread_cap_env_is_accepted() {
    let out = bin()
        .env("PROLONGKIT_THREADS", "1")
        .args(["verify-severi", "veronese", "--samples", "20"])
        .output()
        .unwrap();
    assert!(out.status.success());
}
