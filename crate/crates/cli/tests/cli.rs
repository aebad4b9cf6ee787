//! Black-box tests of the tconj binary: command surface, report contents,
//! and the exit-code contract.

use std::path::PathBuf;
use std::process::{Command, Output};

fn tconj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tconj"))
        .args(args)
        .env_remove("TCONJ_ELEMENT_CAP")
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout_of(out)).expect("stdout parses as JSON")
}

#[test]
fn quotient_reports_order_and_formula_verdict() {
    let out = tconj(&["quotient", "--group", "sl:2:3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("order 24"), "got: {text}");
    assert!(text.contains("matches"), "got: {text}");

    let out = tconj(&["--format", "json", "quotient", "--group", "sl:2:2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["order"], 6);
    assert_eq!(v["formula_matches"], true);

    let out = tconj(&["--format", "json", "quotient", "--group", "sl:2:4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["order"], 48);
    assert_eq!(v["modulus_is_prime"], false);
    assert_eq!(v["formula_order"], serde_json::Value::Null);
}

#[test]
fn reidemeister_with_inner_identity_counts_conjugacy_classes() {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join("identity2.json");
    std::fs::write(&path, r#"{"n": 2, "entries": [[1, 0], [0, 1]]}"#).unwrap();
    let arg = format!("inner:{}", path.display());
    let out = tconj(&["--format", "json", "reidemeister", "--group", "sl:2:3", "--aut", &arg]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let v = json_of(&out);
    assert_eq!(v["reidemeister_number"], 7);
    assert_eq!(v["group"], "sl:2:3");
    assert_eq!(v["classes"].as_array().unwrap().len(), 7);
}

#[test]
fn reidemeister_transpose_inverse_on_smallest_group() {
    let out = tconj(&["--format", "json", "reidemeister", "--group", "sl:2:2", "--aut", "tau"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["reidemeister_number"], 3);
    let sizes: Vec<u64> = v["classes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["size"].as_u64().unwrap())
        .collect();
    assert_eq!(sizes.iter().sum::<u64>(), 6);
}

#[test]
fn certify_emits_certificate_at_first_separating_modulus() {
    let out = tconj(&[
        "--format", "json", "certify", "--family", "A", "--aut", "tau", "--n", "2", "--k", "1",
        "--l", "2", "--moduli", "3,5,7",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let v = json_of(&out);
    assert_eq!(v["verdict"], "distinct");
    assert_eq!(v["modulus"], 3);
    assert_eq!(v["family"], "A");
    assert_eq!(v["n"], 2);
    assert_ne!(v["class_ids"][0], v["class_ids"][1]);
}

#[test]
fn certify_equal_parameters_is_inconclusive() {
    let out = tconj(&[
        "--format", "json", "certify", "--family", "A", "--aut", "tau", "--n", "2", "--k", "2",
        "--l", "2", "--moduli", "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["verdict"], "inconclusive");
}

#[test]
fn certify_swap_conjugation_stops_at_unusable_modulus() {
    let out = tconj(&[
        "certify", "--family", "X", "--aut", "theta", "--n", "4", "--k", "1", "--l", "2",
        "--moduli", "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout_of(&out);
    assert!(text.contains("unusable"), "got: {text}");
}

#[test]
fn verify_suites_pass() {
    for suite in ["identities", "brauer"] {
        let out = tconj(&["verify", "--suite", suite]);
        assert_eq!(out.status.code(), Some(0), "suite {suite}: {}", stderr_of(&out));
        let text = stdout_of(&out);
        assert!(text.contains("[PASS]"), "suite {suite}: {text}");
        assert!(!text.contains("[FAIL]"), "suite {suite}: {text}");
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(tconj(&["quotient"]).status.code(), Some(2));
    assert_eq!(tconj(&["quotient", "--group", "xx:2:3"]).status.code(), Some(2));
    assert_eq!(
        tconj(&["reidemeister", "--group", "sl:2:3", "--aut", "bogus"]).status.code(),
        Some(2)
    );
    assert_eq!(tconj(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
}

#[test]
fn element_cap_exhaustion_exits_three() {
    let out = tconj(&["--element-cap", "10", "quotient", "--group", "sl:2:5"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_of(&out).contains("element cap"));

    let out = Command::new(env!("CARGO_BIN_EXE_tconj"))
        .args(["quotient", "--group", "sl:2:5"])
        .env("TCONJ_ELEMENT_CAP", "10")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn non_bijective_twist_exits_four() {
    let out = tconj(&["reidemeister", "--group", "gl:3:3", "--aut", "chartwist:detsign"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr_of(&out).contains("5616"), "stderr: {}", stderr_of(&out));
}
