use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn lefschetz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lefschetz"))
        .args(args)
        .env_remove("LEFSCHETZ_MAX_N")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write_form(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn kahler_suite_passes_and_reports_every_check() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("report.json");
    let run = lefschetz(&["verify", "kahler", "--n", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0), "{}", stderr(&run));
    let reports: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let reports = reports.as_array().unwrap();
    assert_eq!(reports.len(), 8);
    assert!(reports.iter().all(|r| r["status"] == "pass"));
    assert!(reports.iter().any(|r| r["check"] == "kahler.sl2"));
}

#[test]
fn injectivity_contrast_case_reports_full_kernel() {
    let run = lefschetz(&["verify", "injectivity", "--n", "3", "--k", "3"]);
    assert_eq!(run.status.code(), Some(0));
    let reports: Value = serde_json::from_str(&stdout(&run)).unwrap();
    let rank = &reports[0];
    assert_eq!(rank["check"], "injectivity.rank");
    assert_eq!(rank["witness"]["kernel_dim"], 14);
    assert_eq!(rank["witness"]["contrast_case"], true);
}

#[test]
fn counterexample_witness_names_a_monomial() {
    let run = lefschetz(&["verify", "counterexample", "--n", "3", "--k", "2", "--scale", "2"]);
    assert_eq!(run.status.code(), Some(0));
    let reports: Value = serde_json::from_str(&stdout(&run)).unwrap();
    let moved = reports
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["check"] == "counterexample.not_preserving")
        .unwrap();
    assert_eq!(moved["witness"]["monomial"], serde_json::json!([1, 2, 4, 5]));
    let scaling = reports
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["check"] == "counterexample.scaling")
        .unwrap();
    assert_eq!(scaling["witness"]["ratio"], "16");
}

#[test]
fn output_is_independent_of_worker_count() {
    let one = lefschetz(&["verify", "counterexample", "--n", "2,3", "--jobs", "1"]);
    let four = lefschetz(&["verify", "counterexample", "--n", "2,3", "--jobs", "4"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(stdout(&one), stdout(&four));
}

#[test]
fn describe_summarises_forms() {
    let dir = TempDir::new().unwrap();
    let omega = write_form(
        dir.path(),
        "omega.json",
        r#"{"n":3,"degree":2,"terms":[{"idx":[1,4],"coeff":"1"},{"idx":[2,5],"coeff":"1"},{"idx":[3,6],"coeff":"1"}]}"#,
    );
    let run = lefschetz(&["describe", &omega]);
    assert_eq!(run.status.code(), Some(0));
    assert_eq!(
        stdout(&run).trim(),
        "degree 2, 3 terms, F-weights only, non-degenerate, not primitive (n = 3)"
    );
    let plane = write_form(
        dir.path(),
        "plane.json",
        r#"{"n":3,"degree":2,"terms":[{"idx":[1,2],"coeff":"1/2"}]}"#,
    );
    let run = lefschetz(&["describe", &plane]);
    assert_eq!(
        stdout(&run).trim(),
        "degree 2, 1 term, E-weights only, degenerate, primitive (n = 3)"
    );
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = write_form(
        dir.path(),
        "bad.json",
        r#"{"n":2,"degree":2,"terms":[{"idx":[1,2],"coeff":"1"},{"idx":[3,2],"coeff":"1"}]}"#,
    );
    let run = lefschetz(&["describe", &bad]);
    assert_eq!(run.status.code(), Some(2));
    assert!(stderr(&run).contains("terms[1].idx"), "{}", stderr(&run));
    let garbage = write_form(dir.path(), "garbage.json", "not json");
    assert_eq!(lefschetz(&["describe", &garbage]).status.code(), Some(2));
    assert_eq!(lefschetz(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(
        lefschetz(&["verify", "counterexample", "--scale", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        lefschetz(&["export", "H", "--n", "3", "--k", "7"]).status.code(),
        Some(2)
    );
    assert_eq!(
        lefschetz(&["export", "Q", "--n", "2", "--k", "1"]).status.code(),
        Some(2)
    );
}

#[test]
fn export_writes_operator_matrices() {
    let run = lefschetz(&["export", "H", "--n", "2", "--k", "1"]);
    assert_eq!(run.status.code(), Some(0));
    let h: Value = serde_json::from_str(&stdout(&run)).unwrap();
    assert_eq!(h["rows"], 4);
    assert_eq!(h["cols"], 4);
    for (r, row) in h["entries"].as_array().unwrap().iter().enumerate() {
        for (c, e) in row.as_array().unwrap().iter().enumerate() {
            assert_eq!(e, if r == c { "-1" } else { "0" });
        }
    }
    let run = lefschetz(&["export", "L", "--n", "3", "--k", "2"]);
    let l: Value = serde_json::from_str(&stdout(&run)).unwrap();
    assert_eq!((l["rows"].as_u64(), l["cols"].as_u64()), (Some(15), Some(15)));

    let dir = TempDir::new().unwrap();
    let out = dir.path().join("star.json");
    let run = lefschetz(&["export", "star", "--n", "3", "--k", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0));
    let star: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(star["rows"], 20);
    let nonzero = star["entries"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|row| row.as_array().unwrap().iter())
        .filter(|e| *e != "0")
        .count();
    assert_eq!(nonzero, 20);
}

#[test]
fn dimension_cap_is_configurable() {
    let capped = Command::new(env!("CARGO_BIN_EXE_lefschetz"))
        .args(["export", "L", "--n", "3", "--k", "0"])
        .env("LEFSCHETZ_MAX_N", "2")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(2));
    assert_eq!(lefschetz(&["verify", "kahler", "--n", "7"]).status.code(), Some(2));
}
