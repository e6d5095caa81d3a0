use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qchar_core::QSeries;

fn qchar(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qchar"))
        .args(args)
        .env("QCHAR_CACHE_DIR", cache)
        .output()
        .expect("qchar runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn andrews_gordon_golden() {
    let dir = tempfile::tempdir().unwrap();
    let out = qchar(dir.path(), &["fermionic", "--n", "1", "--k", "2", "--order", "5"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "# fermionic n=1 k=2 weight=2*L0 charges=2 dotted=false order=5\n0 1\n1 1\n2 2\n3 2\n4 3\n5 4\n"
    );
}

#[test]
fn level_one_vacuum_golden() {
    let dir = tempfile::tempdir().unwrap();
    let out = qchar(dir.path(), &["prop01", "--n", "1", "--k", "1", "--order", "5"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "# prop01 n=1 k=1 order=5\n0 1\n1 3\n2 4\n3 7\n4 13\n5 19\n"
    );
}

#[test]
fn string_function_methods_agree() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "string", "--n", "2", "--k", "2", "--weight", "2*L0", "--mu", "0,0", "--order", "12", "--method", "both",
    ];
    let out = qchar(dir.path(), &args);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("## fermionic\n-2/15 1\n13/15 2\n28/15 8\n"));
    assert!(text.contains("## oracle\n-2/15 1\n"));
    assert!(text.ends_with("agree to order 178/15\n"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("built"));
    // second run is served from the cache
    let again = qchar(dir.path(), &args);
    assert_eq!(stdout(&again), text);
    assert!(String::from_utf8_lossy(&again.stderr).contains("cache hit"));
}

#[test]
fn cache_dir_flag_beats_environment() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let out = qchar(
        env_dir.path(),
        &[
            "oracle-build",
            "--n",
            "1",
            "--weight",
            "1*L0+1*L1",
            "--depth",
            "3",
            "--cache-dir",
            flag_dir.path().to_str().unwrap(),
        ],
    );
    assert_eq!(code(&out), 0);
    assert!(flag_dir.path().join("mult-n1-l1_1-d3.json").exists());
    assert_eq!(fs::read_dir(env_dir.path()).unwrap().count(), 0);
}

#[test]
fn verify_durfee_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = qchar(dir.path(), &["verify", "--suite", "durfee", "--order", "40"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "durfee: pass (7 checks)\n");
}

#[test]
fn verify_json_is_a_report_array() {
    let dir = tempfile::tempdir().unwrap();
    let out = qchar(
        dir.path(),
        &["--format", "json", "verify", "--suite", "durfee,cartan-inverse"],
    );
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let suites: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["suite"].as_str().unwrap())
        .collect();
    assert_eq!(suites, ["cartan-inverse", "durfee"]);
    assert!(v.as_array().unwrap().iter().all(|r| r["status"] == "pass"));
}

#[test]
fn table_two_layout_with_reference_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = qchar(
        dir.path(),
        &["table", "--n", "2", "--k", "3", "--weight", "3*L0", "--max-energy", "4"],
    );
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("color-type | energy | color-charge-type | basis\n"));
    assert!(text.contains("(0;3) | 3 | (;1,2) | (-4_{a1} -2_{2a1}), (-3_{a1} -3_{2a1})\n"));
    assert!(text.contains("# reference tables: pass"));
}

#[test]
fn table_one_records_expected_diff() {
    let dir = tempfile::tempdir().unwrap();
    let out = qchar(
        dir.path(),
        &["table", "--n", "2", "--weight", "2*L0", "--max-energy", "7/2"],
    );
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("# table n=2 k=2 weight=2*L0 max-energy=7/2\ncolor-type | energy | basis\n"));
    assert!(text.contains("# note expected diff at table-1 (1;2) 7/2"));
}

#[test]
fn enumerate_lists_monomials() {
    let dir = tempfile::tempdir().unwrap();
    let out = qchar(
        dir.path(),
        &[
            "enumerate",
            "--n",
            "2",
            "--k",
            "2",
            "--max-energy",
            "5/2",
            "--color-type",
            "1;2",
            "--list",
        ],
    );
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "# enumerate n=2 k=2 weight=2*L0 charges=1 grading=parafermionic max-energy=5/2\n\
         3/2 1\n  (1_{a2} -3_{a1} -1_{a1})\n\
         5/2 2\n  (0_{a2} -3_{a1} -1_{a1})\n  (1_{a2} -4_{a1} -1_{a1})\n\
         total 3\n"
    );
}

#[test]
fn json_series_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "--format",
        "json",
        "parafermionic",
        "--n",
        "2",
        "--k",
        "3",
        "--order",
        "4",
        "--mu",
        "1,2",
    ];
    let out = qchar(dir.path(), &args);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let series = QSeries::from_json_value(&v["series"]).unwrap();
    let text = qchar(dir.path(), &args[2..]);
    let mut expected = String::new();
    for (e, c) in series.terms() {
        expected.push_str(&format!("{e} {c}\n"));
    }
    assert!(stdout(&text).ends_with(&expected));
    assert!(!series.is_zero());
}

#[test]
fn config_file_supplies_flags_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(&conf, "# Rogers-Ramanujan\nn = 1\nk = 1\norder = 6\n").unwrap();
    let conf = conf.to_str().unwrap();
    let out = qchar(dir.path(), &["--config", conf, "fermionic"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).ends_with("order=6\n0 1\n1 1\n2 1\n3 1\n4 2\n5 2\n6 3\n"));
    let out = qchar(dir.path(), &["--config", conf, "fermionic", "--order", "1"]);
    assert!(stdout(&out).ends_with("order=1\n0 1\n1 1\n"));
}

#[test]
fn output_is_byte_identical_across_runs_and_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    let base = [
        "--format",
        "json",
        "character",
        "--n",
        "2",
        "--k",
        "2",
        "--weight",
        "1*L0+1*L1",
        "--order",
        "4",
        "--resolved",
    ];
    let first = qchar(dir.path(), &base);
    assert_eq!(code(&first), 0);
    for jobs in ["1", "3"] {
        let mut args = base.to_vec();
        args.extend(["--jobs", jobs]);
        assert_eq!(qchar(dir.path(), &args).stdout, first.stdout);
    }
}

#[test]
fn usage_and_domain_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["fermionic", "--n", "2", "--weight", "2*L7", "--order", "3"],
        &["fermionic", "--n", "2", "--weight", "1*L1+1*L2", "--order", "3"],
        &["fermionic", "--n", "2", "--k", "3", "--weight", "2*L0", "--order", "3"],
        &["fermionic", "--n", "2", "--k", "2", "--order", "0.5"],
        &["parafermionic", "--n", "2", "--k", "2", "--order", "3", "--mu", "1"],
        &["verify", "--suite", "nonsense"],
        &["frobnicate"],
        &[
            "--config",
            "/nonexistent/qchar.conf",
            "prop01",
            "--n",
            "1",
            "--k",
            "1",
            "--order",
            "2",
        ],
    ];
    for args in cases {
        let out = qchar(dir.path(), args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn help_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&qchar(dir.path(), &["--help"])), 0);
}

/// Splits a command line on spaces, honouring double quotes.
fn split_command(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut quoted = false;
    for ch in line.chars() {
        match ch {
            '"' => quoted = !quoted,
            ' ' if !quoted => {
                if !current.is_empty() {
                    out.push(std::mem::take(&mut current));
                }
            }
            _ => current.push(ch),
        }
    }
    if !current.is_empty() {
        out.push(current);
    }
    out
}

#[test]
fn reproduce_commands_rerun_the_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = qchar(
        dir.path(),
        &[
            "--format",
            "json",
            "verify",
            "--suite",
            "durfee,example51,fermionic-vs-oracle",
            "--order",
            "4",
            "--n",
            "1",
            "--k",
            "2",
        ],
    );
    assert_eq!(code(&out), 0);
    let reports: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for report in reports.as_array().unwrap() {
        let words = split_command(report["reproduce"].as_str().unwrap());
        assert_eq!(words[0], "qchar");
        let mut args: Vec<&str> = vec!["--format", "json"];
        args.extend(words[1..].iter().map(String::as_str));
        let again = qchar(dir.path(), &args);
        let rerun: serde_json::Value = serde_json::from_str(&stdout(&again)).unwrap();
        assert_eq!(&rerun[0], report, "{args:?}");
    }
}
