//! End-to-end checks of the command-line surface: output layout of every
//! subcommand, the exit-code contract, file mirroring, and byte-level
//! reproducibility of seeded verification runs.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::{Command, Output};

use pauli_geodesic::family;
use pauli_geodesic::io::{to_json, InputDocument, ResultDocument};
use pauli_geodesic::PauliMask;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pauli-geodesic"))
}

fn run(args: &[&str]) -> Output {
    binary().args(args).output().expect("spawn CLI")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("CLI exited with a code")
}

/// Write `contents` to a unique temp file and return its path.
fn temp_input(tag: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!(
        "pauli-geodesic-cli-{}-{tag}.json",
        std::process::id()
    ));
    std::fs::write(&path, contents).expect("write temp input");
    path
}

/// Input document holding the raw 3-qubit family phases (pi/8 signs).
fn family_input() -> String {
    let h = family::make_h0(3, PauliMask(0b111)).expect("family phases");
    to_json(&InputDocument::from_phases(&h))
}

#[test]
fn expand_prints_the_coefficient_table() {
    let input = temp_input("expand", &family_input());
    let output = run(&["expand", input.to_str().unwrap()]);
    assert_eq!(exit_code(&output), 0);
    let text = stdout_of(&output);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "mask,weight,coefficient");
    assert_eq!(lines[1], "0,0,0.0000000000");
    assert_eq!(lines[8], "7,3,0.3926990817");
    assert_eq!(lines.len(), 9);
    let _ = std::fs::remove_file(input);
}

#[test]
fn expand_mirrors_stdout_into_the_output_file() {
    let input = temp_input("mirror", &family_input());
    let copy = std::env::temp_dir().join(format!(
        "pauli-geodesic-cli-{}-mirror-out.csv",
        std::process::id()
    ));
    let output = run(&[
        "expand",
        input.to_str().unwrap(),
        "--output",
        copy.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0);
    let mirrored = std::fs::read_to_string(&copy).expect("output file written");
    assert_eq!(mirrored, stdout_of(&output));
    let _ = std::fs::remove_file(input);
    let _ = std::fs::remove_file(copy);
}

#[test]
fn minimize_emits_a_self_verifying_document() {
    let input = temp_input("minimize", &family_input());
    for (solver, extra) in [("brute", None), ("bnb", Some(["--workers", "2"]))] {
        let mut args = vec![
            "minimize",
            input.to_str().unwrap(),
            "--metric",
            "fq",
            "--q",
            "100",
            "--solver",
            solver,
        ];
        if let Some(extra) = extra {
            args.extend(extra);
        }
        let output = run(&args);
        assert_eq!(exit_code(&output), 0, "solver {solver}");
        let document: ResultDocument =
            serde_json::from_str(&stdout_of(&output)).expect("result JSON parses");
        document.self_check().expect("document is self-consistent");
        assert_eq!(document.solver.to_string(), solver);
        assert!(document.optimal, "solver {solver} certifies the optimum");
        assert!(
            (document.length - 100.0 * PI / 8.0).abs() < 1e-9,
            "solver {solver} finds the family minimum"
        );
    }
    let _ = std::fs::remove_file(input);
}

#[test]
fn family_report_carries_one_row_per_penalty() {
    let output = run(&["family", "--n", "3"]);
    assert_eq!(exit_code(&output), 0);
    let report: serde_json::Value =
        serde_json::from_str(&stdout_of(&output)).expect("family JSON parses");
    assert_eq!(report["pass"], serde_json::Value::Bool(true));
    assert_eq!(report["sigma"], serde_json::json!(7));
    assert_eq!(report["lemma2"]["rows"].as_array().map(Vec::len), Some(4));
    assert_eq!(report["scaling"]["pass"], serde_json::Value::Bool(true));
}

#[test]
fn verify_runs_are_byte_identical() {
    let args = [
        "verify",
        "--suite",
        "f2bound",
        "--trials",
        "40",
        "--seed",
        "7",
        "--n-max",
        "4",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(exit_code(&first), 0);
    assert_eq!(exit_code(&second), 0);
    assert!(!first.stdout.is_empty());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn bench_rows_agree_across_solvers() {
    let output = run(&[
        "bench",
        "--solver",
        "brute,bnb",
        "--n",
        "3",
        "--q",
        "100",
        "--repeat",
        "2",
    ]);
    assert_eq!(exit_code(&output), 0);
    let text = stdout_of(&output);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "solver,n,q,run,wall_ms,length");
    assert_eq!(lines.len(), 5, "two solvers x two repeats");
    let lengths: Vec<f64> = lines[1..]
        .iter()
        .map(|row| row.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    for length in &lengths {
        assert!((length - lengths[0]).abs() < 1e-9, "solver lengths agree");
    }
}

#[test]
fn parse_failures_exit_2() {
    let garbled = temp_input("garbled", "{not json");
    assert_eq!(exit_code(&run(&["expand", garbled.to_str().unwrap()])), 2);
    let _ = std::fs::remove_file(garbled);

    let missing = std::env::temp_dir().join("pauli-geodesic-cli-does-not-exist.json");
    assert_eq!(exit_code(&run(&["minimize", missing.to_str().unwrap()])), 2);

    assert_eq!(exit_code(&run(&["family", "--n", "3", "--sigma", "0bxyz"])), 2);
    assert_eq!(exit_code(&run(&["verify", "--suite", "no-such-suite"])), 2);
}

#[test]
fn invariant_violations_exit_3() {
    // Exactly one of `phases` / `diag` must be present.
    let both = temp_input(
        "both",
        r#"{"n":1,"phases":[0.0,0.1],"diag":[[1.0,0.0],[1.0,0.0]]}"#,
    );
    assert_eq!(exit_code(&run(&["expand", both.to_str().unwrap()])), 3);
    let _ = std::fs::remove_file(both);

    // Diagonal entries must sit on the unit circle.
    let shrunk = temp_input("shrunk", r#"{"n":1,"diag":[[0.5,0.0],[1.0,0.0]]}"#);
    assert_eq!(exit_code(&run(&["expand", shrunk.to_str().unwrap()])), 3);
    let _ = std::fs::remove_file(shrunk);

    // The family mask must have weight >= 3, epsilon < pi/N.
    assert_eq!(exit_code(&run(&["family", "--n", "3", "--sigma", "0b011"])), 3);
    assert_eq!(exit_code(&run(&["family", "--n", "3", "--epsilon", "1.0"])), 3);
}

#[test]
fn unsupported_combinations_exit_4() {
    let input = temp_input("unsupported", &family_input());
    let path = input.to_str().unwrap();
    // No minimizer is wired to the F1 metric.
    let f1 = run(&["minimize", path, "--metric", "f1"]);
    assert_eq!(exit_code(&f1), 4);
    // --q is required with fq and rejected elsewhere.
    assert_eq!(exit_code(&run(&["minimize", path, "--metric", "fq"])), 4);
    assert_eq!(
        exit_code(&run(&["minimize", path, "--metric", "f2", "--q", "3"])),
        4
    );
    let _ = std::fs::remove_file(input);
}

#[test]
fn oversized_instances_exit_5() {
    let h = family::make_h0(4, PauliMask(0b111)).expect("4-qubit phases");
    let input = temp_input("oversize", &to_json(&InputDocument::from_phases(&h)));
    let output = run(&[
        "minimize",
        input.to_str().unwrap(),
        "--solver",
        "brute",
    ]);
    assert_eq!(exit_code(&output), 5);
    let _ = std::fs::remove_file(input);

    assert_eq!(exit_code(&run(&["bench", "--n", "9", "--repeat", "1"])), 5);
}
