use std::process::Command;

fn reasoner(args: &[&str]) -> (bool, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_reasoner")).args(args).output().unwrap();
    (out.status.success(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn solve_prints_numbered_states() {
    let (ok, out, _) = reasoner(&["solve", "(-x+1)^2 = 9"]);
    assert!(ok);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "strategy: sqrt");
    assert_eq!(lines[1], "0. (-x+1)^2 = 9");
    assert!(lines[2].starts_with("1. -x+1 = 3 or -x+1 = -3"));
    assert!(lines[2].ends_with("[SQRT_BOTH_SIDES]"));
    assert!(lines.last().unwrap().starts_with("3. x = -2 or x = 4"));

    let (ok, out, _) = reasoner(&["solve", "x^2-3*x = 0", "--strategy", "quadratic-formula"]);
    assert!(ok, "{out}");
    assert_eq!(out.lines().next().unwrap(), "strategy: quadratic-formula");
}

#[test]
fn solve_reports_bad_input() {
    let (ok, _, err) = reasoner(&["solve", "x^2 = = 1"]);
    assert!(!ok);
    assert!(err.contains("offset"), "{err}");
    let (ok, _, _) = reasoner(&["solve", "x^3 = 1"]);
    assert!(!ok);
}

#[test]
fn diagnose_prints_a_record() {
    let (ok, out, _) =
        reasoner(&["diagnose", "--task", "(-x+1)^2 = 9", "--input", "(-x+1)^2 - 9 = 0"]);
    assert!(ok);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["class"], "deviation");
    assert_eq!(v["relation"], 3);
    let (ok, out, _) = reasoner(&[
        "diagnose",
        "--task",
        "(-x+1)^2 = 9",
        "--prev",
        "-x+1 = 3 or -x+1 = -3",
        "--input",
        "x = -2 or x = 4",
        "--max-lookahead",
        "3",
    ]);
    assert!(ok);
    assert!(out.contains("\"finished\""));
}

#[test]
fn batch_writes_summary() {
    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("s.json");
    let log = concat!(env!("CARGO_MANIFEST_DIR"), "/data/walkthrough.jsonl");
    let (ok, out, _) = reasoner(&["batch", log, "--summary", summary.to_str().unwrap()]);
    assert!(ok);
    assert!(out.contains("label agreement  4/4"), "{out}");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(summary).unwrap()).unwrap();
    assert_eq!(v["counts"]["correct"], 2);
    assert_eq!(v["total"], 4);
}

#[test]
fn rules_list_names_every_rule() {
    let (ok, out, _) = reasoner(&["rules", "list"]);
    assert!(ok);
    for rule in proptrace::RuleId::ALL {
        assert!(out.contains(rule.name()), "{}", rule.name());
    }
    assert!(out.contains("TIDY (minor)"));
}
