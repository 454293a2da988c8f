//! End-to-end tests against the compiled binary: grammar handling, exit
//! codes, witness round-trips, and report determinism.

use std::path::Path;
use std::process::{Command, Output};

fn suslin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_suslin"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout_of(out)).expect("report is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn eval_prints_matrix() {
    let out = suslin(&["eval", "E(1,2;x1)"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["dimension"], 3);
    assert_eq!(v["matrix"][0][1], "x1");
    assert_eq!(v["matrix"][1][1], "1");
    assert_eq!(v["matrix"][2][0], "0");
}

#[test]
fn eval_symplectic_word() {
    let out = suslin(&["--n", "2", "eval", "SpU(1;x1) SpL(1,2;1)"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["dimension"], 4);
    assert_eq!(v["matrix"][0][2], "x1");
}

#[test]
fn eval_rejects_mixed_words() {
    let out = suslin(&["eval", "E(1,2;x1) SpU(1;1)"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn eval_modular_ring() {
    let out = suslin(&["--mod", "5", "eval", "E(1,2;-x1)"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["ring"]["coeff"], "mod 5");
    assert_eq!(v["matrix"][0][1], "4*x1");
}

#[test]
fn conjugate_factor_emits_verified_witness() {
    let out = suslin(&["conjugate-factor", "E(2,1;x1)", "1", "3", "1"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["verified"], "yes");
    assert_eq!(v["claimed_bound"], 30);
    assert!(v["word"].as_array().unwrap().len() <= 30);

    // identical invocation gives a byte-identical report
    let again = suslin(&["conjugate-factor", "E(2,1;x1)", "1", "3", "1"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn witness_round_trip_verifies_and_tampering_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("witness.json");
    let out = suslin(&[
        "--out",
        path.to_str().unwrap(),
        "conjugate-factor",
        "E(2,1;x1) E(1,3;x1^2-1) E(3,2;2)",
        "1",
        "2",
        "x1+1",
    ]);
    assert_eq!(code(&out), 0);
    assert!(path.exists());

    let out = suslin(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "emitted witness must re-verify");
    let v = json_of(&out);
    assert_eq!(v["verified"], "yes");
    assert_eq!(v["product_matches"], true);

    // delete one letter: the product no longer matches
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let word = doc["word"].as_array_mut().unwrap();
    word.pop();
    let tampered = dir.path().join("tampered.json");
    std::fs::write(&tampered, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    let out = suslin(&["verify", tampered.to_str().unwrap()]);
    assert_eq!(code(&out), 1, "tampered witness must fail verification");
    let v = json_of(&out);
    assert_eq!(v["verified"], "no");

    let out = suslin(&["verify", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn relations_fuzz_deterministic_and_green() {
    let args = ["--seed", "11", "--trials", "25", "relations-fuzz"];
    let first = suslin(&args);
    assert_eq!(code(&first), 0);
    let v = json_of(&first);
    assert_eq!(v["type_a"]["failures"], 0);
    assert_eq!(v["type_c"]["failures"], 0);
    assert_eq!(v["all_passed"], true);

    let second = suslin(&args);
    assert_eq!(first.stdout, second.stdout);

    let different_seed = suslin(&["--seed", "12", "--trials", "25", "relations-fuzz"]);
    assert_eq!(code(&different_seed), 0);
}

#[test]
fn cocycle_reports_pi_c_and_kernel() {
    let out = suslin(&["cocycle", "E(1,2;x1)"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["pi"][0][1], "0");
    assert_eq!(v["c"][0][1], "1");
    assert_eq!(v["in_kernel"], true);

    let out = suslin(&["cocycle", "E(1,2;x1+3)"]);
    let v = json_of(&out);
    assert_eq!(v["pi"][0][1], "3");
    assert_eq!(v["in_kernel"], false);

    // the cocycle lives over Z[x1] only
    assert_eq!(code(&suslin(&["--vars", "2", "cocycle", "E(1,2;x1)"])), 2);
    assert_eq!(code(&suslin(&["--mod", "5", "cocycle", "E(1,2;x1)"])), 2);
}

#[test]
fn subring_lists_distinct_parameters() {
    let out = suslin(&["subring", "E(1,2;x1^2+1) E(2,3;-5) E(2,1;x1^2+1)"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    let gens: Vec<&str> = v["generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g.as_str().unwrap())
        .collect();
    assert_eq!(gens, vec!["-5", "x1^2+1"]);
}

#[test]
fn defect_of_derivation_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("samples.json");
    std::fs::write(
        &path,
        r#"{"pairs": [["E(1,2;x1)", "E(2,1;x1^2)"], ["E(1,3;x1+2) E(3,2;-1)", "E(2,1;5)"]]}"#,
    )
    .unwrap();
    let out = suslin(&["defect", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["samples"], 2);
    assert_eq!(v["defect"], "0");

    std::fs::write(&path, "not json").unwrap();
    assert_eq!(code(&suslin(&["defect", path.to_str().unwrap()])), 2);
}

#[test]
fn input_errors_exit_two() {
    // syntax error in the parameter
    let out = suslin(&["eval", "E(1,2;x1+^)"]);
    assert_eq!(code(&out), 2);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("parse error"), "{stderr}");

    // unknown variable, diagonal index, out-of-range dimension
    assert_eq!(code(&suslin(&["eval", "E(1,2;x7)"])), 2);
    assert_eq!(code(&suslin(&["eval", "E(1,1;x1)"])), 2);
    assert_eq!(code(&suslin(&["--n", "44", "eval", "E(1,2;x1)"])), 2);

    // invalid modulus and trial count
    assert_eq!(code(&suslin(&["--mod", "1", "eval", "E(1,2;1)"])), 2);
    assert_eq!(code(&suslin(&["--trials", "0", "relations-fuzz"])), 2);

    // conjugation needs i != j within range
    assert_eq!(
        code(&suslin(&["conjugate-factor", "E(2,1;x1)", "2", "2", "1"])),
        2
    );
    assert_eq!(
        code(&suslin(&["conjugate-factor", "E(2,1;x1)", "1", "9", "1"])),
        2
    );
}

#[test]
fn out_flag_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = suslin(&["--out", path.to_str().unwrap(), "eval", "E(1,2;1)"]);
    assert_eq!(code(&out), 0);
    assert!(stdout_of(&out).is_empty());
    let text = std::fs::read_to_string(Path::new(&path)).unwrap();
    assert!(text.ends_with('\n'));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["command"], "eval");
}
