//! End-to-end tests that drive the compiled binary the way a user would.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn poincare(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_poincare"))
        .args(args)
        .env_remove("POINCARE_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn poincare_with_cache(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_poincare"))
        .args(args)
        .env("POINCARE_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn compute_text_prints_numerator_and_denominator() {
    let out = poincare(&["compute", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("A[5] = [1,0,0,0,0,0,-1]"), "got: {text}");
    assert!(text.contains("B[5] = (1-t^4)(1-t^6)(1-t^8)"), "got: {text}");
}

#[test]
fn compute_json_is_parseable_and_complete() {
    let out = poincare(&["compute", "--n", "8", "--emit", "json"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let value: Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(value["n"], 8);
    assert_eq!(value["s"], 4);
    assert_eq!(value["delta"], 8);
    assert_eq!(value["denominator"]["kind"], "even4");
    let half: Vec<i64> = value["half"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_i64().unwrap())
        .collect();
    assert_eq!(half, vec![1, 1, 0, -1, -1, 0, 1, 1, 1]);
    let factors: Vec<&str> = value["denominator"]["factors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(
        factors,
        vec!["1+t", "1-t^2", "1-t^3", "1-t^4", "1-t^5", "1-t^3", "1-t^7"]
    );
    assert_eq!(value["seed"], 42);
    assert_eq!(value["primes"][0], 65521);
}

#[test]
fn degrees_below_three_are_usage_errors() {
    let out = poincare(&["compute", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("at least 3"));
}

#[test]
fn degrees_above_the_bound_are_usage_errors() {
    let out = poincare(&["compute", "--n", "12", "--max-n", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("exceeds"));
    let out = poincare(&["compute", "--n", "10", "--max-n", "10"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bad_flags_are_usage_errors_but_help_is_not() {
    let out = poincare(&["compute", "--n", "5", "--primes", "newest"]);
    assert_eq!(out.status.code(), Some(2));
    let out = poincare(&["compute", "--n", "5", "--prime-bits", "40"]);
    assert_eq!(out.status.code(), Some(2));
    let out = poincare(&["compute", "--n", "5", "--jobs", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = poincare(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
    let out = poincare(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("compute"));
}

#[test]
fn certify_reports_and_exits_zero() {
    let out = poincare(&["certify", "--n", "6"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("n = 6: CERTIFIED"), "got: {text}");
}

#[test]
fn fixture_check_passes_and_verbose_counts_terms() {
    let out = poincare(&["fixture5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("fixture holds"));
    let out = poincare(&["fixture5", "--verbose"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("16"), "got: {text}");
}

#[test]
fn table_stdout_lists_one_line_per_degree() {
    let out = poincare(&["table", "--from", "3", "--to", "6"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines,
        vec![
            "A[3] = [1]",
            "A[4] = [1]",
            "A[5] = [1,0,0,0,0,0,-1]",
            "A[6] = [1,1,0,-1,-1]",
        ]
    );
}

#[test]
fn table_out_writes_json_and_text_twins() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("table.json");
    let out = poincare(&[
        "table",
        "--from",
        "3",
        "--to",
        "8",
        "--out",
        json_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let value: Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(value["seed"], 42);
    assert_eq!(value["primes"]["policy"], "paper");
    assert_eq!(value["entries"].as_array().unwrap().len(), 6);
    assert_eq!(value["entries"][0]["n"], 3);
    let text = std::fs::read_to_string(dir.path().join("table.txt")).unwrap();
    assert!(text.starts_with("A[3] = [1]\n"));
    assert!(text.contains("A[8] = [1,1,0,-1,-1,0,1,1,1]"));
}

#[test]
fn table_rejects_bad_ranges() {
    let out = poincare(&["table", "--from", "6", "--to", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = poincare(&["table", "--from", "2", "--to", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn jobs_do_not_change_output() {
    let serial = poincare(&["table", "--from", "3", "--to", "9", "--jobs", "1"]);
    let parallel = poincare(&["table", "--from", "3", "--to", "9", "--jobs", "8"]);
    assert_eq!(serial.status.code(), Some(0));
    assert_eq!(parallel.status.code(), Some(0));
    assert_eq!(stdout(&serial), stdout(&parallel));
}

#[test]
fn cache_round_trip_reuses_entries() {
    let dir = tempfile::tempdir().unwrap();
    let cold = poincare_with_cache(&["compute", "--n", "7", "--emit", "json"], dir.path());
    assert_eq!(cold.status.code(), Some(0), "stderr: {}", stderr(&cold));
    let cached_file = dir
        .path()
        .join(format!("v{}", env!("CARGO_PKG_VERSION")))
        .join("n7.json");
    assert!(cached_file.exists());
    let stored: Value =
        serde_json::from_str(&std::fs::read_to_string(&cached_file).unwrap()).unwrap();
    assert_eq!(stored["n"], 7);
    let warm = poincare_with_cache(&["compute", "--n", "7", "--emit", "json"], dir.path());
    assert_eq!(warm.status.code(), Some(0));
    assert_eq!(stdout(&cold), stdout(&warm));
}

#[test]
fn corrupted_cache_entries_are_recomputed_not_trusted() {
    let dir = tempfile::tempdir().unwrap();
    let cold = poincare_with_cache(&["compute", "--n", "6"], dir.path());
    assert_eq!(cold.status.code(), Some(0));
    let cached_file = dir
        .path()
        .join(format!("v{}", env!("CARGO_PKG_VERSION")))
        .join("n6.json");
    let mut stored: Value =
        serde_json::from_str(&std::fs::read_to_string(&cached_file).unwrap()).unwrap();
    stored["half"][0] = Value::from(5);
    std::fs::write(&cached_file, stored.to_string()).unwrap();
    let warm = poincare_with_cache(&["compute", "--n", "6"], dir.path());
    assert_eq!(warm.status.code(), Some(0));
    assert_eq!(stdout(&cold), stdout(&warm));
}

#[test]
fn verify_accepts_its_own_tables_and_flags_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("table.json");
    let out = poincare(&[
        "table",
        "--from",
        "3",
        "--to",
        "7",
        "--out",
        json_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let ok = poincare(&["verify", "--against", json_path.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0), "stderr: {}", stderr(&ok));
    assert!(stdout(&ok).contains("verified 5 entries"));

    let mut table: Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    table["entries"][2]["half"][6] = Value::from(3);
    std::fs::write(&json_path, table.to_string()).unwrap();
    let bad = poincare(&["verify", "--against", json_path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("n = 5: DIFFERS"));
}

#[test]
fn verify_missing_file_is_an_io_error() {
    let out = poincare(&["verify", "--against", "/no/such/table.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_reports_entries_outside_the_domain() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("table.json");
    let out = poincare(&[
        "table",
        "--from",
        "3",
        "--to",
        "4",
        "--out",
        json_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let mut table: Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    table["entries"][0]["n"] = Value::from(2);
    std::fs::write(&json_path, table.to_string()).unwrap();
    let bad = poincare(&["verify", "--against", json_path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("recomputation failed"));
}

#[test]
fn bench_prints_phase_times_to_stderr() {
    let out = poincare(&["compute", "--n", "6", "--bench"]);
    assert_eq!(out.status.code(), Some(0));
    let err = stderr(&out);
    for phase in ["sampling", "solves", "interpolation", "crt", "certify"] {
        assert!(err.contains(phase), "missing {phase} in: {err}");
    }
    assert!(!stdout(&out).contains("sampling"));
}

#[test]
fn auto_primes_agree_with_the_fixed_supply() {
    let paper = poincare(&["compute", "--n", "9"]);
    let auto = poincare(&["compute", "--n", "9", "--primes", "auto", "--prime-bits", "29"]);
    assert_eq!(paper.status.code(), Some(0));
    assert_eq!(auto.status.code(), Some(0), "stderr: {}", stderr(&auto));
    assert_eq!(stdout(&paper), stdout(&auto));
}
