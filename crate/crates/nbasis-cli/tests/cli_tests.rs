//! End-to-end checks of the binary: exit codes, schema shape, seed
//! plumbing, and byte-level determinism.

use std::process::{Command, Output};

use serde_json::Value;

fn nbasis(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nbasis"))
        .args(args)
        .env_remove("NBASIS_SEED")
        .output()
        .expect("binary runs")
}

fn nbasis_env(args: &[&str], seed: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nbasis"))
        .args(args)
        .env("NBASIS_SEED", seed)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

#[test]
fn classes_match_known_orbits() {
    let out = nbasis(&["classes", "--q", "2", "--n", "7"]);
    let v = stdout_json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "classes");
    assert_eq!(v["classes"], serde_json::json!([[0], [1, 2, 4], [3, 5, 6]]));
    assert_eq!(v["field"]["q"], "2");
    assert_eq!(v["field"]["n"], 7);
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        vec!["census", "--q", "2,3", "--n", "1..5"],
        vec!["test", "--q", "2", "--n", "3", "--elem", "1,1,0", "--all"],
        vec!["idempotents", "--q", "3", "--n", "4"],
        vec!["search", "--q", "2", "--n", "5", "--seed", "7"],
        vec!["verify", "--q", "2", "--n", "6", "--format", "text"],
    ] {
        let a = nbasis(&args);
        let b = nbasis(&args);
        assert!(a.status.success(), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "non-deterministic output for {args:?}");
    }
}

#[test]
fn worker_count_does_not_change_census_bytes() {
    let base = nbasis(&["census", "--q", "2,5", "--n", "1..6"]);
    for w in ["2", "5", "16"] {
        let out = nbasis(&["census", "--q", "2,5", "--n", "1..6", "--workers", w]);
        assert_eq!(base.stdout, out.stdout, "workers={w} changed output");
    }
}

#[test]
fn census_rows_are_json_lines() {
    let out = nbasis(&["census", "--q", "2", "--n", "1..6"]);
    assert!(out.status.success());
    let lines: Vec<&str> = std::str::from_utf8(&out.stdout)
        .unwrap()
        .lines()
        .collect();
    assert_eq!(lines.len(), 6);
    let counts: Vec<String> = lines
        .iter()
        .map(|l| {
            let row: Value = serde_json::from_str(l).expect("each line parses alone");
            assert_eq!(row["schema_version"], 1);
            row["nbg_count"].as_str().unwrap().to_string()
        })
        .collect();
    assert_eq!(counts, vec!["1", "2", "3", "8", "15", "24"]);
}

#[test]
fn exit_codes_follow_failure_class() {
    // Success.
    assert_eq!(nbasis(&["classes", "--q", "2", "--n", "5"]).status.code(), Some(0));
    // Usage problems: unknown subcommand, missing argument, bad value.
    assert_eq!(nbasis(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(nbasis(&["test", "--q", "2", "--n", "3"]).status.code(), Some(1));
    assert_eq!(nbasis(&["classes", "--q", "12", "--n", "5"]).status.code(), Some(1));
    // Operational refusals are not internal failures.
    assert_eq!(
        nbasis(&["factor", "--q", "2", "--n", "6"]).status.code(),
        Some(1)
    );
    assert_eq!(
        nbasis(&["census", "--q", "2", "--n", "6", "--criterion", "thm7"]).status.code(),
        Some(1)
    );
    // Help and version are successes.
    assert_eq!(nbasis(&["--help"]).status.code(), Some(0));
    assert_eq!(nbasis(&["--version"]).status.code(), Some(0));
}

#[test]
fn seed_env_and_flag_interact() {
    let flag = nbasis(&["search", "--q", "2", "--n", "4", "--seed", "5"]);
    let env = nbasis_env(&["search", "--q", "2", "--n", "4"], "5");
    assert_eq!(flag.stdout, env.stdout, "env seed must match the flag");
    let overridden = nbasis_env(&["search", "--q", "2", "--n", "4", "--seed", "5"], "9");
    assert_eq!(flag.stdout, overridden.stdout, "the flag outranks the env");
    let default = nbasis(&["search", "--q", "2", "--n", "4"]);
    assert_ne!(
        default.stdout, flag.stdout,
        "different seeds should pick a different modulus here"
    );
}

#[test]
fn search_result_round_trips_through_test() {
    let out = stdout_json(&nbasis(&["search", "--q", "3", "--n", "4", "--seed", "2"]));
    let modulus = out["field"]["modulus"].as_str().unwrap().to_string();
    let elem: String = match &out["element"] {
        Value::Array(coords) => coords
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(","),
        other => panic!("element should be a coordinate array, got {other}"),
    };
    let verdict = stdout_json(&nbasis(&[
        "test", "--q", "3", "--n", "4", "--seed", "2", "--elem", &elem,
    ]));
    assert_eq!(verdict["field"]["modulus"].as_str().unwrap(), modulus);
    assert_eq!(verdict["unanimous"], true);
    for v in verdict["verdicts"].as_array().unwrap() {
        assert_eq!(v["is_nbg"], true, "criterion {}", v["criterion"]);
    }
}

#[test]
fn test_reports_inapplicable_criteria_with_reasons() {
    let out = stdout_json(&nbasis(&[
        "test", "--q", "2", "--n", "7", "--elem", "1,0,0,0,0,0,0", "--all",
    ]));
    let verdicts = out["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 8);
    let thm4 = verdicts.iter().find(|v| v["criterion"] == "thm4").unwrap();
    assert_eq!(thm4["applicable"], false);
    assert!(thm4.get("is_nbg").is_none());
    assert!(thm4["witnesses"]["reason"].as_str().unwrap().contains("order"));
    let single = stdout_json(&nbasis(&[
        "test", "--q", "2", "--n", "7", "--elem", "1,0,0,0,0,0,0", "--criterion", "thm5",
    ]));
    assert_eq!(single["verdicts"].as_array().unwrap().len(), 1);
}

#[test]
fn zeta_seed_changes_representation_not_counts() {
    let a = nbasis(&["verify", "--q", "3", "--n", "5"]);
    let b = nbasis(&["verify", "--q", "3", "--n", "5", "--zeta-seed", "11"]);
    let (ja, jb) = (stdout_json(&a), stdout_json(&b));
    assert_eq!(ja["nbg_count"], jb["nbg_count"]);
    assert_eq!(ja["unanimous"], true);
    assert_eq!(jb["unanimous"], true);
}

#[test]
fn idempotents_reports_passing_checks() {
    let out = stdout_json(&nbasis(&["idempotents", "--q", "2", "--n", "7"]));
    let checks = &out["checks"];
    for key in [
        "matrix_inverse",
        "sum_is_one",
        "orthogonal_idempotent",
        "factor_residues",
        "root_evaluations",
    ] {
        assert_eq!(checks[key], true, "check {key}");
    }
    assert_eq!(out["idempotents"].as_array().unwrap().len(), 3);
}

#[test]
fn factor_degrees_match_class_sizes() {
    let out = stdout_json(&nbasis(&["factor", "--q", "2", "--n", "15"]));
    let degrees: Vec<u64> = out["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d.as_u64().unwrap())
        .collect();
    let classes = stdout_json(&nbasis(&["classes", "--q", "2", "--n", "15"]));
    let sizes: Vec<u64> = classes["classes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_array().unwrap().len() as u64)
        .collect();
    assert_eq!(degrees, sizes);
    assert_eq!(degrees.iter().sum::<u64>(), 15);
}

#[test]
fn text_format_is_line_oriented() {
    let out = nbasis(&["classes", "--q", "2", "--n", "7", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("command: classes\n"));
    assert!(text.contains("\nclasses: 3\n"));
    assert!(text.contains("[1,2,4]"));
}
