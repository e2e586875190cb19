//! Black-box checks of the binary: artifact shapes, exit codes, and
//! byte-level reproducibility.

use std::fs;
use std::process::{Command, Output};

fn acalab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_acalab"))
        .args(args)
        .output()
        .expect("binary launches")
}

fn stdout_of(output: &Output) -> String {
    assert!(
        output.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout.clone()).expect("utf8 output")
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn identity_rule_produces_identical_rows() {
    let out = stdout_of(&acalab(&[
        "simulate", "--rule", "204", "--n", "12", "--scheme", "sync", "--steps", "10", "--start",
        "010011010011", "--format", "txt",
    ]));
    let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| *r == ".#..##.#..##"));
}

#[test]
fn pbm_artifact_is_well_formed_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spacetime.pbm");
    let path_str = path.to_str().unwrap();
    let args = [
        "simulate", "--rule", "110", "--n", "40", "--scheme", "skew", "--steps", "20", "--seed",
        "99", "--format", "pbm", "--out", path_str,
    ];
    stdout_of(&acalab(&args));
    let first = fs::read(&path).unwrap();
    stdout_of(&acalab(&args));
    let second = fs::read(&path).unwrap();
    assert_eq!(first, second, "same invocation, same bytes");

    let text = String::from_utf8(first).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("P1"));
    let comment = lines.next().unwrap();
    assert!(comment.starts_with("# manifest: {"));
    assert_eq!(lines.next(), Some("40 21"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 21);
    assert!(rows.iter().all(|r| r.len() == 40));
    assert!(rows
        .iter()
        .all(|r| r.chars().all(|c| c == '0' || c == '1')));
}

#[test]
fn density_csv_has_one_row_per_normalized_step() {
    let out = stdout_of(&acalab(&[
        "simulate", "--rule", "50", "--n", "30", "--scheme", "fully", "--steps", "15", "--seed",
        "5", "--format", "csv",
    ]));
    let mut lines = out.lines();
    assert!(lines.next().unwrap().starts_with("# manifest:"));
    assert_eq!(lines.next(), Some("step,density"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 16);
    assert!(rows[0].starts_with("0,"));
    assert!(rows[15].starts_with("15,"));
}

#[test]
fn classify_emits_the_expected_json_verdicts() {
    let out = stdout_of(&acalab(&[
        "classify", "--rule", "142", "--n", "8", "--scheme", "fully",
    ]));
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(value["class"], "Recurrent");
    assert_eq!(value["closed_classes"], 7);

    let out = stdout_of(&acalab(&[
        "classify", "--rule", "204", "--n", "4", "--scheme", "fully",
    ]));
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(value["class"], "Convergent+Recurrent");
    assert_eq!(value["point_attractors"], 16);
}

#[test]
fn commclasses_prints_the_bare_count_by_default() {
    let out = stdout_of(&acalab(&[
        "commclasses", "--rule", "142", "--n", "8", "--scheme", "fully",
    ]));
    assert_eq!(out.trim(), "7");

    let out = stdout_of(&acalab(&[
        "commclasses", "--rule", "105", "--n", "9", "--scheme", "fully", "--json",
    ]));
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(value["count"], 2);
    assert_eq!(value["recurrent"], true);
}

#[test]
fn scan_covers_every_minimal_rule_and_labels_the_phase_change() {
    let out = stdout_of(&acalab(&["scan", "--scheme", "fully", "--n-range", "6:6"]));
    let rows: Vec<&str> = out
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("rule,"))
        .collect();
    assert_eq!(rows.len(), 88);
    assert!(rows.contains(&"26,6,fully,Convergent,1,1"));
    assert!(rows.iter().any(|r| r.starts_with("38,6,fully,Recurrent")));
}

#[test]
fn theorem_validate_reports_soundness() {
    let out = stdout_of(&acalab(&["theorem", "--validate", "38", "--n-range", "4:7"]));
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(value["sound"], true);

    let out = stdout_of(&acalab(&["theorem", "--validate", "106", "--n-range", "4:4"]));
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(value["sound"], false);
    assert_eq!(value["report"]["checks"][0]["unreachable"].as_array().unwrap().len(), 11);

    let out = stdout_of(&acalab(&["theorem", "--rule", "204"]));
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(value["verdict"]["to_zero"], false);
    assert_eq!(value["verdict"]["to_one"], false);
}

#[test]
fn usage_problems_exit_2() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["simulate", "--rule", "30", "--n", "10", "--scheme", "fully", "--steps", "5"],
        vec!["simulate", "--rule", "30", "--n", "10", "--scheme", "sync", "--steps", "5", "--alpha", "0.5", "--seed", "1"],
        vec!["classify", "--rule", "30", "--n", "4", "--scheme", "alpha", "--alpha", "1.5"],
        vec!["classify", "--rule", "30", "--n", "4", "--scheme", "fully", "--mode", "empirical"],
        vec!["scan", "--scheme", "fully", "--n-range", "9:4"],
        vec!["theorem"],
        vec!["no-such-subcommand"],
    ];
    for args in cases {
        let output = acalab(&args);
        assert_eq!(
            output.status.code(),
            Some(2),
            "args {args:?} gave {:?}: {}",
            output.status.code(),
            String::from_utf8_lossy(&output.stderr)
        );
    }
}

#[test]
fn oversized_exact_requests_exit_3() {
    let output = acalab(&[
        "classify", "--rule", "30", "--n", "30", "--scheme", "alpha", "--alpha", "0.5",
    ]);
    assert_eq!(output.status.code(), Some(3));
    let message = String::from_utf8_lossy(&output.stderr);
    assert_eq!(message.lines().count(), 1, "single-line error: {message}");

    let output = acalab(&["commclasses", "--rule", "30", "--n", "60", "--scheme", "fully"]);
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn cluster_labels_are_reproducible_and_respect_the_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let labels = dir.path().join("labels.csv");
    let emitted = dir.path().join("spec.json");
    let books = fixture("books.csv");
    let encoding = fixture("books_encoding.json");
    let args = [
        "cluster", "--input", books.as_str(), "--k", "3", "--seed", "7", "--encoding",
        encoding.as_str(), "--out", labels.to_str().unwrap(), "--emit-encoding",
        emitted.to_str().unwrap(),
    ];
    let output = acalab(&args);
    assert!(output.status.success());
    // The gap value 319 in the table triggers a clamp warning on stderr.
    assert!(String::from_utf8_lossy(&output.stderr).contains("319"));
    let first = fs::read(&labels).unwrap();
    assert!(acalab(&args).status.success());
    assert_eq!(first, fs::read(&labels).unwrap());

    let text = String::from_utf8(first).unwrap();
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("object,"))
        .collect();
    assert_eq!(rows.len(), 10);
    // Duplicate configurations (objects 3 and 9) stay together.
    let label_of = |id: usize| rows[id].split(',').nth(1).unwrap().to_string();
    assert_eq!(label_of(3), label_of(9));

    // The emitted spec is loadable and reproduces the same labels.
    let args = [
        "cluster", "--input", books.as_str(), "--k", "3", "--seed", "7", "--encoding",
        emitted.to_str().unwrap(), "--out", labels.to_str().unwrap(),
    ];
    assert!(acalab(&args).status.success());
    let reloaded = fs::read_to_string(&labels).unwrap();
    let reloaded_rows: Vec<&str> = reloaded
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("object,"))
        .collect();
    assert_eq!(reloaded_rows, rows);
}

#[test]
fn cluster_handles_a_purely_quantitative_table() {
    let dir = tempfile::tempdir().unwrap();
    let labels = dir.path().join("labels.csv");
    let indices = dir.path().join("indices.json");
    let iris = fixture("iris.csv");
    let output = acalab(&[
        "cluster", "--input", iris.as_str(), "--k", "3", "--seed", "7", "--out",
        labels.to_str().unwrap(), "--indices", indices.to_str().unwrap(),
    ]);
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    let text = fs::read_to_string(&labels).unwrap();
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("object,"))
        .collect();
    assert_eq!(rows.len(), 150);
    let mut seen = [false; 3];
    for row in &rows {
        let label: usize = row.split(',').nth(1).unwrap().parse().unwrap();
        assert!(label < 3);
        seen[label] = true;
    }
    assert!(seen.iter().all(|&s| s), "all three clusters non-empty");

    let value: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&indices).unwrap()).unwrap();
    assert!(value["indices"]["silhouette"].is_number());
}
