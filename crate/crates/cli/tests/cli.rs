use std::path::PathBuf;

use assert_cmd::Command;
use predicates::prelude::*;
use serde_json::Value;

fn toppling() -> Command {
    Command::cargo_bin("toppling").unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = toppling().args(args).assert().success().get_output().stdout.clone();
    String::from_utf8(out).unwrap()
}

fn schema(name: &str) -> Value {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "docs", "schemas", name].iter().collect();
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Replaces `{"$ref": "<file>"}` nodes by the referenced schema files.
fn inline_refs(v: &mut Value) {
    match v {
        Value::Object(map) => {
            if let Some(Value::String(r)) = map.get("$ref") {
                if r.ends_with(".json") {
                    let mut sub = schema(r);
                    if let Value::Object(m) = &mut sub {
                        m.remove("$id");
                        m.remove("$schema");
                    }
                    *v = sub;
                    return;
                }
            }
            map.values_mut().for_each(inline_refs);
        }
        Value::Array(items) => items.iter_mut().for_each(inline_refs),
        _ => {}
    }
}

fn assert_valid(schema_file: &str, doc: &str) {
    let mut s = schema(schema_file);
    inline_refs(&mut s);
    // The relative $id has no base once loaded from memory.
    s.as_object_mut().unwrap().remove("$id");
    let validator = jsonschema::JSONSchema::compile(&s).unwrap();
    let instance: Value = serde_json::from_str(doc).unwrap();
    if let Err(errors) = validator.validate(&instance) {
        let msgs: Vec<String> = errors.map(|e| format!("{e} at {}", e.instance_path)).collect();
        panic!("{schema_file}: {msgs:?}");
    };
}

#[test]
fn topple_example() {
    toppling()
        .args(["topple", "--config", "1,(2,3),4"])
        .assert()
        .success()
        .stdout("resultant: 1234, empty-site: 2\n");
    toppling()
        .args(["topple", "--config", "4,(3,2),1"])
        .assert()
        .success()
        .stdout("resultant: 2143, empty-site: 2\n");
}

#[test]
fn topple_lifted_permutation() {
    toppling()
        .args(["topple", "--perm", "213", "--r", "2", "--p", "2"])
        .assert()
        .success()
        .stdout(predicate::str::starts_with("resultant: "));
}

#[test]
fn seeded_topple_matches_passes() {
    let passes = stdout(&["topple", "--config", "7,3,1,5,(2,4),6,8"]);
    for seed in ["0", "1", "99"] {
        let random = stdout(&["topple", "--config", "7,3,1,5,(2,4),6,8", "--seed", seed]);
        assert_eq!(random, passes);
    }
}

#[test]
fn poly_bernoulli_example() {
    toppling()
        .args(["polybernoulli", "B", "--n", "5", "--k", "5"])
        .assert()
        .success()
        .stdout("329462\n");
    for method in ["closed", "inclusion-exclusion", "recurrence"] {
        toppling()
            .args(["polybernoulli", "C", "--n", "5", "--k", "5", "--method", method])
            .assert()
            .success()
            .stdout("164731\n");
    }
}

#[test]
fn check_examples() {
    toppling()
        .args(["check", "all-r", "--perm", "1234", "--p", "2"])
        .assert()
        .success()
        .stdout("true\n");
    toppling()
        .args(["check", "all-r", "--perm", "21", "--p", "1"])
        .assert()
        .success()
        .stdout("false\n");
    toppling()
        .args(["check", "resultant", "--perm", "1243", "--p", "2"])
        .assert()
        .success()
        .stdout("true\n");
    toppling()
        .args(["check", "resultant", "--perm", "2413", "--p", "2"])
        .assert()
        .success()
        .stdout("false\n");
}

#[test]
fn counts() {
    assert_eq!(stdout(&["count", "all-r", "--n", "4", "--p", "2"]), "7\n");
    assert_eq!(stdout(&["count", "all-r", "--n", "4", "--p", "2", "--brute"]), "7\n");
    for method in ["delta", "c-sum", "brute"] {
        assert_eq!(stdout(&["count", "rp", "--n", "5", "--p", "2", "--r", "3", "--method", method]), "22\n");
    }
    assert_eq!(stdout(&["count", "toppleable", "--n", "5", "--p", "3"]), "115\n");
    assert_eq!(stdout(&["count", "ao", "--n", "2", "--k", "2"]), "14\n");
    assert_eq!(stdout(&["count", "npi", "--perm", "123456", "--r", "2", "--p", "2"]), "32\n");
}

#[test]
fn family_listing_ends_with_count() {
    let out = stdout(&["count", "family", "--family", "window-c", "--n", "2", "--k", "2", "--list"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.last(), Some(&"7"));
    assert_eq!(lines.len(), 8);
}

#[test]
fn bijection_worked_example() {
    toppling()
        .args([
            "biject",
            "--callan-to-vesz",
            "--word",
            "5,7,12,11,1,4,8,14,3,6,9,15,13,10,2",
            "--u",
            "9",
            "--o",
            "6",
        ])
        .assert()
        .success()
        .stdout(predicate::str::contains("1,6,4,8,7,10,12,11,13,3,2,9,5,14,15"));
}

#[test]
fn parse_errors_cite_the_token() {
    toppling()
        .args(["topple", "--config", "1,(2,x),4"])
        .assert()
        .failure()
        .stderr(predicate::str::contains("x"));
    toppling()
        .args(["check", "all-r", "--perm", "1,1,2", "--p", "1"])
        .assert()
        .failure()
        .stderr(predicate::str::contains("1"));
    toppling()
        .args(["polybernoulli", "B", "--n", "five", "--k", "5"])
        .assert()
        .failure()
        .stderr(predicate::str::contains("five"));
}

#[test]
fn usage_errors_exit_nonzero() {
    toppling().assert().failure();
    toppling().args(["frobnicate"]).assert().failure().stderr(predicate::str::contains("frobnicate"));
    toppling().args(["topple"]).assert().failure();
    toppling()
        .args(["tables", "--which", "1c"])
        .assert()
        .failure()
        .stderr(predicate::str::contains("1c"));
    toppling()
        .args(["--jobs", "0", "verify", "--n-max", "2"])
        .assert()
        .failure();
}

#[test]
fn caps_are_enforced() {
    toppling()
        .args(["count", "toppleable", "--n", "9", "--p", "2", "--brute"])
        .assert()
        .failure()
        .stderr(predicate::str::contains("cap"));
}

#[test]
fn output_is_identical_across_runs_and_jobs() {
    let cases: [&[&str]; 4] = [
        &["verify", "--n-max", "5", "--format", "json"],
        &["tables", "--which", "T-counts", "--n", "5", "--brute"],
        &["tables", "--which", "resultant-fibers", "--n", "4", "--p", "2", "--format", "json"],
        &["topple", "--config", "7,3,1,5,(2,4),6,8", "--seed", "42", "--format", "json"],
    ];
    for args in cases {
        let base = stdout(args);
        assert_eq!(stdout(args), base, "{args:?}");
        for jobs in ["1", "3"] {
            let mut with = vec!["--jobs", jobs];
            with.extend_from_slice(args);
            assert_eq!(stdout(&with), base, "{args:?} with --jobs {jobs}");
        }
    }
}

#[test]
fn csv_has_header_and_decimal_cells() {
    let out = stdout(&["tables", "--which", "1a", "--n", "5"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n\\k,0,1,2,3,4,5"));
    let last = lines.last().unwrap();
    assert_eq!(last.rsplit(',').next(), Some("329462"));
    assert!(out.lines().skip(1).all(|l| l.split(',').all(|c| c.parse::<u64>().is_ok())));
}

#[test]
fn verify_report_is_clean_and_valid() {
    let out = stdout(&["verify", "--n-max", "5", "--format", "json"]);
    assert_valid("verify-report.schema.json", &out);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["summary"]["mismatched"], 0);
    assert!(v["summary"]["documented"].as_u64().unwrap() > 0);
}

#[test]
fn topple_json_is_valid() {
    let out = stdout(&["topple", "--config", "7,3,1,5,(2,4),6,8", "--format", "json", "--trace"]);
    assert_valid("topple.schema.json", &out);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["trace"].as_array().unwrap().len(), 3);
    let out = stdout(&["topple", "--config", "1,(2,3),4", "--format", "json", "--seed", "5"]);
    assert_valid("topple.schema.json", &out);
}

#[test]
fn text_trace_is_valid() {
    let out = stdout(&["topple", "--config", "7,3,1,5,(2,4),6,8", "--trace"]);
    let (first, rest) = out.split_once('\n').unwrap();
    assert_eq!(first, "resultant: 12374568, empty-site: 3");
    assert_valid("pass-trace.schema.json", rest);
}

#[test]
fn tables_json_are_valid() {
    let cases: [&[&str]; 7] = [
        &["--which", "1a", "--n", "5"],
        &["--which", "1b", "--n", "5"],
        &["--which", "2", "--n", "6"],
        &["--which", "resultant-fibers", "--n", "4", "--p", "2"],
        &["--which", "T-array", "--n", "6", "--p", "2"],
        &["--which", "T-counts", "--n", "4"],
        &["--which", "Npi", "--n", "6", "--p", "2", "--r", "2"],
    ];
    for args in cases {
        let mut full = vec!["tables", "--format", "json"];
        full.extend_from_slice(args);
        assert_valid("table.schema.json", &stdout(&full));
    }
}
