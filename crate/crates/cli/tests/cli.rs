// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mbqc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mbqc"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}); stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited")
}

#[test]
fn find_on_fig4a_corrects_node_one_by_itself() {
    let dir = tempfile::tempdir().unwrap();
    let out = mbqc(dir.path(), &["flow", "find", "fig4a.json"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["result"]["found"], true);
    assert_eq!(r["result"]["flow"]["correction"]["1"], serde_json::json!([1]));
}

#[test]
fn find_on_fig4b_reports_no_gflow() {
    let dir = tempfile::tempdir().unwrap();
    let out = mbqc(dir.path(), &["flow", "find", "fig4b"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("no gflow"));
    assert_eq!(report(&out)["result"]["found"], false);
}

#[test]
fn fig1b_profile_is_rl_with_gflow() {
    let dir = tempfile::tempdir().unwrap();
    let r = report(&mbqc(dir.path(), &["flow", "profile", "fig1b.json"]));
    assert_eq!(r["result"]["is_rl"], true);
    assert_eq!(r["result"]["has_gflow"], true);
}

#[test]
fn verify_uses_the_stored_flow_and_rejects_a_bad_one() {
    let dir = tempfile::tempdir().unwrap();
    let ok = mbqc(dir.path(), &["flow", "verify", "fig4a"]);
    assert_eq!(code(&ok), 0);
    assert_eq!(report(&ok)["result"]["valid"], true);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"correction":{"1":[2]},"layers":{"1":0,"2":0,"3":0}}"#).unwrap();
    let out = mbqc(dir.path(), &["flow", "verify", "fig4a", "--flow", "bad.json"]);
    assert_eq!(code(&out), 1);
    assert_eq!(report(&out)["passed"], false);
}

#[test]
fn brute_agrees_with_find_on_fig4c() {
    let dir = tempfile::tempdir().unwrap();
    let r = report(&mbqc(dir.path(), &["flow", "brute", "fig4c"]));
    assert_eq!(r["result"]["found"], false);
}

#[test]
fn beveled_four_has_24_nodes_and_writes_both_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = mbqc(dir.path(), &["build", "beveled", "--n", "4"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["result"]["nodes"], 24);
    assert!(dir.path().join("beveled4.json").exists());
    let dot = std::fs::read_to_string(dir.path().join("beveled4.dot")).unwrap();
    assert!(dot.starts_with("graph G {"));
}

#[test]
fn brl_from_alpha_file_has_parity_labels_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("a.json"), "[0.1, -0.4, 0.7, 0.2, 1.1, -0.3, 0.0, 0.5]").unwrap();
    let out = mbqc(dir.path(), &["build", "brl", "--alpha-file", "a.json", "-o", "brl3.json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["result"]["parity_labels"], 7);
    let sim = mbqc(dir.path(), &["simulate", "brl3.json", "--all"]);
    assert_eq!(code(&sim), 0);
    assert_eq!(report(&sim)["result"]["deterministic"], true);
}

#[test]
fn lhz_five_has_fifteen_nodes() {
    let dir = tempfile::tempdir().unwrap();
    let r = report(&mbqc(dir.path(), &["build", "lhz", "--n", "5"]));
    assert_eq!(r["result"]["nodes"], 15);
    assert_eq!(r["result"]["construction"]["pairs"].as_array().unwrap().len(), 10);
}

#[test]
fn cell_s_branches_are_s_up_to_a_pauli() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&mbqc(dir.path(), &["build", "cell", "--gate", "S"])), 0);
    let out = mbqc(dir.path(), &["simulate", "cell_S.json", "--all", "--extract", "--expect", "S"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    let branches = r["result"]["branches"].as_array().unwrap();
    assert_eq!(branches.len(), 32);
    assert!(branches.iter().all(|b| b["pauli"].is_string()));
}

#[test]
fn wrong_expectation_fails_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    mbqc(dir.path(), &["build", "cell", "--gate", "H"]);
    let out = mbqc(dir.path(), &["simulate", "cell_H.json", "--extract", "--expect", "S"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn empty_pattern_gives_a_trivial_report() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("empty.json"),
        r#"{"name":"empty","graph":{"nodes":[],"edges":[]},"input_order":[],"output_order":[],"commands":[]}"#,
    )
    .unwrap();
    let out = mbqc(dir.path(), &["simulate", "empty.json", "--all"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["result"]["branches"].as_array().unwrap().len(), 1);
    assert_eq!(r["result"]["branches"][0]["probability"], 1.0);
}

#[test]
fn same_seed_gives_byte_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    mbqc(dir.path(), &["build", "gadget", "--gate", "ry(0.3)"]);
    let run = |seed: &str| mbqc(dir.path(), &["simulate", "gadget_ry_0.3.json", "--sample", seed, "--seed", "5"]).stdout;
    assert_eq!(run("11"), run("11"));
    let t = |s: &str| mbqc(dir.path(), &["flow", "profile", s]).stdout;
    assert_eq!(t("fig4e"), t("fig4e"));
}

#[test]
fn compile_verifies_a_two_wire_word() {
    let dir = tempfile::tempdir().unwrap();
    let out = mbqc(dir.path(), &["compile", "H;RY(0.3);CZ(0,1)", "--width", "2", "--verify", "-o", "w.json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert!(dir.path().join("w.json").exists());
}

#[test]
fn table_lists_five_gates_and_nine_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = mbqc(dir.path(), &["table"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["result"]["cell_gates"].as_array().unwrap().len(), 5);
    assert_eq!(r["result"]["q3"].as_array().unwrap().len(), 9);
    assert_eq!(r["result"]["cell_gates"][1]["correction_q6"], "X^(b2+b3) Z^(b1+b4+b5)");
}

#[test]
fn usage_and_parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&mbqc(dir.path(), &["nonsense"])), 2);
    assert_eq!(code(&mbqc(dir.path(), &["flow", "find", "missing.json"])), 2);
    std::fs::write(dir.path().join("junk.json"), "{ not json").unwrap();
    assert_eq!(code(&mbqc(dir.path(), &["simulate", "junk.json"])), 2);
    assert_eq!(code(&mbqc(dir.path(), &["build", "cell", "--gate", "T"])), 2);
}

#[test]
fn qubit_cap_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    mbqc(dir.path(), &["build", "cell", "--gate", "I"]);
    let out = Command::new(env!("CARGO_BIN_EXE_mbqc"))
        .args(["simulate", "cell_I.json", "--all"])
        .env("MBQC_MAX_QUBITS", "2")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn catalog_criterion_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = mbqc(dir.path(), &["paper-suite", "--only", "1"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("PASS criterion 1"));
}

#[test]
fn known_discrepancies_fail_unless_allowed() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&mbqc(dir.path(), &["paper-suite", "--only", "5"])), 1);
    assert_eq!(code(&mbqc(dir.path(), &["paper-suite", "--only", "5", "--allow-known"])), 0);
}
