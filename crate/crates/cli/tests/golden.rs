use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const FIXTURES: [&str; 3] = ["duplication", "beta_ratio", "narrow_sector"];
const COMMANDS: [&str; 6] = ["domain", "coeffs", "eval", "oracle", "compare", "abscissa"];

fn dir(sub: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join(sub)
}

fn foxh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_foxh")).args(args).output().expect("foxh runs")
}

fn run_fixture(command: &str, fixture: &str, threads: &str) -> Output {
    let job = dir("fixtures").join(format!("{fixture}.json"));
    foxh(&[command, "--job", job.to_str().unwrap(), "--threads", threads])
}

#[test]
fn outputs_match_golden_files_across_runs_and_threads() {
    for fixture in FIXTURES {
        for command in COMMANDS {
            let out_file = dir("golden").join(format!("{fixture}.{command}.out"));
            let err_file = dir("golden").join(format!("{fixture}.{command}.err"));
            for threads in ["1", "4", "1", "4"] {
                let out = run_fixture(command, fixture, threads);
                if out_file.exists() {
                    assert!(out.status.success(), "{command} {fixture}: {}", String::from_utf8_lossy(&out.stderr));
                    let expected = std::fs::read(&out_file).unwrap();
                    assert!(out.stdout == expected, "{command} {fixture} with {threads} threads differs from golden");
                } else {
                    let expected = std::fs::read(&err_file).unwrap();
                    assert_eq!(out.status.code(), Some(2), "{command} {fixture}");
                    assert!(out.stdout.is_empty());
                    assert!(out.stderr == expected, "{command} {fixture} error record differs from golden");
                }
            }
        }
    }
}

#[test]
fn jsonl_lines_are_json_objects() {
    let job = dir("fixtures").join("narrow_sector.json");
    let out = foxh(&["compare", "--job", job.to_str().unwrap(), "--format", "jsonl"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    for line in &lines {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v.get("rel_err").is_some());
    }
    let footer: serde_json::Value = serde_json::from_str(lines[4]).unwrap();
    assert_eq!(footer["record"], "max_rel_err");
}

#[test]
fn writes_to_out_file() {
    let tmp = tempfile::tempdir().unwrap();
    let target = tmp.path().join("domain.csv");
    let job = dir("fixtures").join("duplication.json");
    let out = foxh(&["domain", "--job", job.to_str().unwrap(), "--out", target.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let golden = std::fs::read(dir("golden").join("duplication.domain.out")).unwrap();
    assert_eq!(std::fs::read(target).unwrap(), golden);
}

fn error_record(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stderr).expect("stderr holds a JSON record")
}

#[test]
fn validation_failures_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let job = tmp.path().join("job.json");
    std::fs::write(&job, r#"{"alpha": [1], "a": [2], "beta": [2], "b": [1]}"#).unwrap();
    let out = foxh(&["domain", "--job", job.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["error"], "NotDeltaNeutral");

    std::fs::write(&job, r#"{"alpha": [1], "a": [2], "beta": [1], "b": [1], "digits": 8}"#).unwrap();
    let out = foxh(&["domain", "--job", job.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["error"], "InvalidJob");

    std::fs::write(&job, r#"{"alpha": [1], "a": [2], "beta": [1], "b": [1], "colour": "red"}"#).unwrap();
    let out = foxh(&["domain", "--job", job.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_job_exits_4() {
    let out = foxh(&["domain", "--job", "/nonexistent/job.json"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(error_record(&out)["error"], "Io");
}

#[test]
fn point_failures_keep_exit_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let job = tmp.path().join("job.json");
    std::fs::write(
        &job,
        r#"{"alpha": [1], "a": ["1.3"], "beta": [1], "b": ["0.3"], "sigma": "0.3", "n_max": 10, "grid": [0.5, 2.5, -1]}"#,
    )
    .unwrap();
    let out = foxh(&["eval", "--job", job.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let status: Vec<&str> = text.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(status, ["ok", "OutsideDisk", "BranchCut"]);
}

#[test]
fn digits_override_changes_precision() {
    let job = dir("fixtures").join("duplication.json");
    let out = foxh(&["domain", "--job", job.to_str().unwrap(), "--digits", "20"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("0.0000000000000000000e0,2.0000000000000000000e0,5.0000000000000000000e-1,"), "{row}");
}
