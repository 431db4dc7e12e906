use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn covdepth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covdepth"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn exact_example_one() {
    let m = fixture("example1.txt");
    let v = json(&covdepth(&["exact", "--matrix", &m, "--target", "1"]));
    assert_eq!(v["t_max"]["num"], "23");
    assert_eq!(v["t_max"]["den"], "12");
    assert_eq!(v["per_target"][0]["target"], "e1");
    assert!(v["timing_secs"].is_number());
    for engine in ["beta", "dp"] {
        let w = json(&covdepth(&["exact", "--matrix", &m, "--engine", engine, "--no-timing"]));
        assert_eq!(w["t_max"]["decimal"], "1.91666666666667");
        assert_eq!(w["argmax"], serde_json::json!(["e1", "e2"]));
        assert!(w.get("timing_secs").is_none());
    }
}

#[test]
fn exact_set_and_column_targets() {
    let m = fixture("example1.txt");
    let set = json(&covdepth(&["exact", "--matrix", &m, "--set", "1,2", "--no-timing"]));
    assert_eq!(set["per_target"][0]["target"], "{1,2}");
    let col = json(&covdepth(&[
        "exact",
        "--family",
        "parity:k=2",
        "--column",
        "3",
        "--no-timing",
    ]));
    assert_eq!(col["t_max"]["num"], "2");
}

#[test]
fn bounds_example() {
    let v = json(&covdepth(&["bounds", "--q", "2", "--n", "2", "--k", "2"]));
    assert_eq!(v["bound2"]["num"], "3");
    assert_eq!(v["bound2"]["den"], "2");
}

#[test]
fn closed_form_ext_simplex_csv() {
    let out = covdepth(&[
        "closed-form",
        "--family",
        "ext-simplex",
        "--params",
        "q=2,k=4",
        "--x-max",
        "5",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().find(|l| l.starts_with("2,")).expect("x=2 row");
    assert!(row.ends_with(",0.939872729394788"), "{row}");
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn simulate_is_byte_identical_across_threads() {
    let m = fixture("example1.txt");
    let run = |threads: &str| {
        let out = covdepth(&[
            "simulate",
            "--matrix",
            &m,
            "--trials",
            "5000",
            "--seed",
            "11",
            "--no-timing",
            "--threads",
            threads,
        ]);
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn balance_reports_witness() {
    let v = json(&covdepth(&["balance", "--family", "sum13", "--no-timing"]));
    assert_eq!(v["balanced"], false);
    assert_eq!(v["witness"], serde_json::json!([1, 4]));
    let p = json(&covdepth(&["balance", "--family", "hamming:r=3", "--paut"]));
    assert_eq!(p["balanced"], true);
    assert_eq!(p["paut"]["group_order"], 168);
}

#[test]
fn search_finds_example_value() {
    let v = json(&covdepth(&[
        "search", "--q", "2", "--k", "2", "--n", "5", "--iters", "300", "--seed", "4",
    ]));
    assert_eq!(v["best"]["num"], "23");
    assert_eq!(v["best"]["den"], "12");
}

#[test]
fn duality_rows() {
    let out = covdepth(&[
        "duality",
        "--family",
        "hamming:r=3",
        "--family",
        "simplex:k=3",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"hamming:r=3\",4,7,true,true,false"));
    assert!(text.contains("\"simplex:k=3\",3,7,true,true,false"));
}

#[test]
fn exit_codes() {
    assert_eq!(covdepth(&["exact"]).status.code(), Some(2));
    assert_eq!(covdepth(&["exact", "--family", "nonsense"]).status.code(), Some(2));
    assert_eq!(
        covdepth(&["exact", "--family", "parity:k=2", "--target", "0"])
            .status
            .code(),
        Some(2)
    );
    let guard = covdepth(&["exact", "--family", "simplex:k=3", "--max-enum-bits", "4"]);
    assert_eq!(guard.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&guard.stderr).contains("estimated cost: 2^7"));
    let rate = covdepth(&["balance", "--family", "parity:k=2", "--product", "identity:k=2"]);
    assert_eq!(rate.status.code(), Some(2));
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("covdepth-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.csv");
    let p = path.to_string_lossy().into_owned();
    let m = fixture("example1.txt");
    assert!(covdepth(&["exact", "--matrix", &m, "--format", "csv", "-o", &p])
        .status
        .success());
    let stdout = covdepth(&["exact", "--matrix", &m, "--format", "csv"]).stdout;
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}
