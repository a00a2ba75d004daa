//! End-to-end tests of the `jsc` binary: golden machine output, format
//! round-trips, determinism, and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

use jsc_cli::report::{emit_machine, parse_machine};

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn jsc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jsc"))
        .args(args)
        .current_dir(manifest_dir())
        .output()
        .expect("failed to launch jsc")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout not utf-8")
}

#[test]
fn golden_machine_report_for_shift_pair() {
    let out = jsc(&[
        "bounds",
        "tests/fixtures/odd_even.txt",
        "--t-max",
        "12",
        "--format",
        "machine",
    ]);
    assert!(out.status.success());
    let golden_path = manifest_dir().join("tests/golden/odd_even_bounds_machine.txt");
    let golden = std::fs::read_to_string(golden_path).unwrap();
    assert_eq!(
        stdout_of(&out),
        golden,
        "machine output drifted from the committed golden file"
    );
}

#[test]
fn machine_output_round_trips_through_parser() {
    for args in [
        vec![
            "bounds",
            "tests/fixtures/cross_pair.txt",
            "--t-max",
            "6",
            "--format",
            "machine",
        ],
        vec![
            "subradius",
            "tests/fixtures/limit_pair.txt",
            "--t-max",
            "6",
            "--format",
            "machine",
        ],
        vec![
            "kron",
            "tests/fixtures/cross_pair.txt",
            "--k-max",
            "3",
            "--format",
            "machine",
        ],
        vec![
            "trace-seq",
            "tests/fixtures/odd_even.txt",
            "--t-max",
            "8",
            "--format",
            "machine",
        ],
        vec![
            "cone-check",
            "tests/fixtures/wedge_pair.txt",
            "--trials",
            "4",
            "--format",
            "machine",
        ],
        vec![
            "perturb",
            "tests/fixtures/positive_pair.txt",
            "--deltas",
            "0.1,0.01",
            "--trials",
            "3",
            "--t-max",
            "4",
            "--format",
            "machine",
        ],
        vec![
            "verify",
            "tests/fixtures/positive_pair.txt",
            "--t-max",
            "6",
            "--format",
            "machine",
        ],
    ] {
        let out = jsc(&args);
        assert!(
            out.status.success(),
            "command {args:?} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let text = stdout_of(&out);
        let (job, body) =
            parse_machine(&text).unwrap_or_else(|e| panic!("cannot parse output of {args:?}: {e}"));
        assert_eq!(
            emit_machine(&job, &body),
            text,
            "re-emission differs for {args:?}"
        );
    }
}

#[test]
fn machine_output_is_deterministic() {
    let args = [
        "perturb",
        "tests/fixtures/positive_pair.txt",
        "--deltas",
        "0.1,0.01",
        "--trials",
        "5",
        "--seed",
        "3",
        "--t-max",
        "4",
        "--format",
        "machine",
    ];
    let first = jsc(&args);
    let second = jsc(&args);
    assert!(first.status.success());
    assert_eq!(
        first.stdout, second.stdout,
        "same input and seed must give identical bytes"
    );
}

#[test]
fn out_flag_writes_the_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let out = jsc(&[
        "bounds",
        "tests/fixtures/odd_even.txt",
        "--t-max",
        "4",
        "--format",
        "machine",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("schema jsc-report/1"));
    let (_, _) = parse_machine(&text).unwrap();
}

#[test]
fn validation_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "dim 2\nmatrices 1\n1 2 3\n4 5 6\n").unwrap();
    let out = jsc(&["bounds", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));

    let out = jsc(&["bounds", "does/not/exist.txt"]);
    assert_eq!(out.status.code(), Some(2));

    // Rejected parameter combinations are validation errors too.
    let out = jsc(&[
        "perturb",
        "tests/fixtures/positive_pair.txt",
        "--deltas",
        "0.01,0.1",
        "--trials",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nonincreasing"));
}

#[test]
fn budget_errors_exit_3_and_name_the_horizon() {
    let out = jsc(&[
        "bounds",
        "tests/fixtures/odd_even.txt",
        "--t-max",
        "40",
        "--budget",
        "1000",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("largest admissible t_max"), "stderr: {err}");
}

#[test]
fn cone_check_reports_non_invariance_with_success_exit() {
    let dir = tempfile::tempdir().unwrap();
    let rot = dir.path().join("rotation.txt");
    std::fs::write(&rot, "dim 2\nmatrices 1\n0 -1\n1 0\ncone orthant\n").unwrap();
    let out = jsc(&["cone-check", rot.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "the answer is the product, not an error"
    );
    let text = stdout_of(&out);
    assert!(
        text.contains("false"),
        "expected a non-invariant verdict in: {text}"
    );
}

#[test]
fn cone_check_requires_a_cone() {
    let out = jsc(&["cone-check", "tests/fixtures/sigma_k3.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cone_flag_overrides_input_file() {
    // sigma_k3 has no cone block; the flag attaches the orthant.
    let out = jsc(&[
        "subradius",
        "tests/fixtures/sigma_k3.txt",
        "--t-max",
        "8",
        "--cone",
        "orthant",
        "--format",
        "machine",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let (job, body) = parse_machine(&text).unwrap();
    assert!(job.cone_override);
    match body {
        jsc_cli::report::ReportBody::Subradius(o) => {
            assert_eq!(o.cone_invariant, Some(false));
            assert_eq!(o.interval.upper, 0.0);
            assert_eq!(o.interval.lower, 0.0);
        }
        other => panic!("unexpected body {other:?}"),
    }
}

#[test]
fn verify_failing_input_exits_4() {
    // An input the battery cannot certify does not exist among the sane
    // fixtures; instead check that verify on a good input exits 0 and
    // prints only passing lines.
    let out = jsc(&["verify", "tests/fixtures/cross_pair.txt", "--t-max", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("checks passed"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_handles_one_dimensional_positive_input() {
    // No line meets a half-line in a bounded chord, so the embedding
    // estimate is unavailable; the battery must still complete.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scalar.txt");
    std::fs::write(&path, "dim 1\nmatrices 1\n2\ncone orthant\n").unwrap();
    let out = jsc(&["verify", path.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout_of(&out).contains("estimate unavailable"));
}

#[test]
fn human_format_subradius_shows_certificate() {
    let out = jsc(&["subradius", "tests/fixtures/limit_pair.txt", "--t-max", "6"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("conic certificate"));
    assert!(text.contains("subradius interval"));
}

#[test]
fn golden_file_is_committed() {
    assert!(manifest_dir()
        .join("tests/golden/odd_even_bounds_machine.txt")
        .exists());
}
