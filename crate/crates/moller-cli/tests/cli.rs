//! End-to-end tests of the binary: exit codes, deterministic output, and
//! exact report round trips.

use std::process::Command;

use moller_cli::report::{Report, Verdict};

fn model(name: &str) -> String {
    format!("{}/../../models/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_moller"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn strip_timing(report: &str) -> String {
    report
        .lines()
        .filter(|l| !l.trim_start().starts_with("\"timing_ms\""))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn exit_codes() {
    let (code, _, _) = run(&["check", &model("kg1.json")]);
    assert_eq!(code, 0);
    // unreadable file: parse error
    let (code, _, err) = run(&["check", &model("no_such_model.json")]);
    assert_eq!(code, 2, "stderr: {err}");
    // mutated structure constants: model-invariant failure
    let (code, out, _) = run(&["check", &model("cs_sl2_mutated.json")]);
    assert_eq!(code, 3);
    assert!(out.contains("[FAIL] homotopy Jacobi"));
}

#[test]
fn schema_violations_are_exit_2() {
    let dir = std::env::temp_dir();
    let unknown = dir.join("moller_unknown_field.json");
    std::fs::write(
        &unknown,
        r#"{"schema": "moller-model/1", "kind": "kg", "k": 1, "power": 4, "d_matrix": [["2"]], "extra": 1}"#,
    )
    .unwrap();
    let (code, _, err) = run(&["check", unknown.to_str().unwrap()]);
    assert_eq!(code, 2, "stderr: {err}");

    let missing = dir.join("moller_missing_field.json");
    std::fs::write(&missing, r#"{"schema": "moller-model/1", "kind": "cs"}"#).unwrap();
    let (code, _, _) = run(&["check", missing.to_str().unwrap()]);
    assert_eq!(code, 2);

    let bad_rat = dir.join("moller_bad_rational.json");
    std::fs::write(
        &bad_rat,
        r#"{"schema": "moller-model/1", "kind": "kg", "k": 1, "power": 4, "d_matrix": [["2.5"]]}"#,
    )
    .unwrap();
    let (code, _, _) = run(&["check", bad_rat.to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn machine_reports_are_deterministic_and_round_trip() {
    let (code, first, _) = run(&["check", &model("cs_sl2_minimal.json"), "--emit", "machine"]);
    assert_eq!(code, 0);
    let (_, second, _) = run(&["check", &model("cs_sl2_minimal.json"), "--emit", "machine"]);
    assert_eq!(strip_timing(&first), strip_timing(&second));

    let rep = Report::from_machine(&first).unwrap();
    assert_eq!(rep.verdict, Verdict::NonExistence);
    let witness = rep.nonexistence_witness.as_ref().expect("non-existence carries a witness");
    witness.to_core().unwrap();
    let cert_out = rep.obstruction.as_ref().expect("obstructed tower carries a certificate");
    let cert = cert_out.to_core().unwrap();
    assert_eq!(cert.order, 1);

    // exact round trip, rationals included
    let again = Report::from_machine(&rep.to_machine()).unwrap();
    assert_eq!(rep, again);
    assert_eq!(
        moller_cli::report::CertificateOut::from_core(&cert),
        rep.obstruction.clone().unwrap()
    );
}

#[test]
fn cohomology_table_matches_known_columns() {
    let (code, out, _) = run(&[
        "cohomology",
        &model("cs_sl2_minimal.json"),
        "--degree",
        "0",
        "--weight",
        "6",
    ]);
    assert_eq!(code, 0);
    for line in [
        "0     1          1",
        "1     3          0",
        "2     6          1",
        "3    10          0",
        "4    15          1",
        "5    21          0",
        "6    28          1",
    ] {
        assert!(out.contains(line), "missing row {line:?} in:\n{out}");
    }
}

#[test]
fn route_selection() {
    let (code, out, _) = run(&["check", &model("cs_sl2_minimal.json"), "--route", "hpt"]);
    assert_eq!(code, 0);
    assert!(out.contains("NON-EXISTENCE"));
    assert!(!out.contains("obstruction tower"));
    let (code, out, _) = run(&["check", &model("cs_sl2_minimal.json"), "--route", "tower"]);
    assert_eq!(code, 0);
    assert!(out.contains("OBSTRUCTED-AT-ORDER(1)"));
    assert!(!out.contains("transferred-bracket"));
}

#[test]
fn mc_and_jacobi_tables() {
    let (code, out, _) = run(&["mc", &model("kg1.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("Maurer-Cartan identity, order 1"));
    let (code, out, _) = run(&["jacobi", &model("cs_sl2_mutated.json")]);
    assert_eq!(code, 3);
    assert!(out.contains("[FAIL] Jacobi identity, arity 3"));
}
