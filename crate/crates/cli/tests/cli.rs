use std::process::{Command, Output};

use serde_json::Value;

fn dholes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dholes")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = dholes(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn text(args: &[&str]) -> String {
    let out = dholes(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn classify_examples() {
    assert_eq!(json(&["classify", "3/10", "7/10"])["kind"], "FixedOnly");
    let v = json(&["classify", "17/50", "33/50"]);
    assert_eq!(v["kind"], "CountableCycles");
    assert_eq!(v["cycles"], serde_json::json!(["(01)"]));
    let v = json(&["classify", "21/50", "29/50"]);
    assert_eq!(v["kind"], "PositiveEntropy");
    assert!(v["entropy_lo"].as_f64().unwrap() > 0.0);
}

#[test]
fn argument_errors_exit_with_two() {
    for args in [
        &["classify", "2/4", "3/4"][..],
        &["classify", "3/4", "1/4"],
        &["classify", "a/b", "1/2"],
        &["scan", "1/2", "3/4", "4"],
        &["bisect-astar", "--precision", "25"],
        &["trap", "2/3", "1/3"],
        &["word", "standard", "0"],
        &["gap", "1", "1"],
        &["no-such-command"],
    ] {
        let out = dholes(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn budget_exhaustion_exits_with_three_and_a_partial_bracket() {
    let out = dholes(&["bisect-astar", "--precision", "12", "--max-states", "5"]);
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["complete"], false);
    assert_eq!(dholes(&["classify", "1/3", "2/3", "--max-states", "1"]).status.code(), Some(3));
}

#[test]
fn bisection_brackets_the_thue_morse_constant() {
    for p in [4u32, 12, 16] {
        let v = json(&["bisect-astar", "--precision", &p.to_string()]);
        let (lo, hi) = (v["lo_value"].as_f64().unwrap(), v["hi_value"].as_f64().unwrap());
        assert!(hi - lo <= 2f64.powi(-(p as i32)));
        assert!(lo <= 0.412454 && 0.412454 <= hi, "{p}: [{lo}, {hi}]");
    }
    let v = json(&["bisect-astar", "--precision", "4"]);
    assert_eq!((v["lo"].as_str(), v["hi"].as_str()), (Some("3/8"), Some("7/16")));
}

#[test]
fn scan_is_deterministic_and_monotone() {
    let args = ["scan", "1/4", "63/128", "7"];
    let first = dholes(&args);
    let second = dholes(&args);
    assert_eq!(first.stdout, second.stdout);
    let s = String::from_utf8(first.stdout).unwrap();
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("a,kind,entropy_lo,entropy_hi,dimension"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 32);
    assert_eq!(rows[0][..2], ["1/4", "FixedOnly"]);
    let first_positive = rows.iter().position(|r| r[1] == "PositiveEntropy").unwrap();
    assert!(rows[first_positive..].iter().all(|r| r[1] == "PositiveEntropy"));
    assert!(rows[..first_positive].iter().all(|r| r[2] == "0"));
}

#[test]
fn scan_points_either_side_of_the_critical_value() {
    let s = text(&["scan", "105/256", "107/256", "8"]);
    let kinds: Vec<&str> = s.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_ne!(kinds[0], "PositiveEntropy");
    assert_eq!(kinds[2], "PositiveEntropy");
}

#[test]
fn catalog_lists_certified_gap_holes() {
    let v = json(&["catalog", "--max-q", "7", "--certify"]);
    let rows = v.as_array().unwrap();
    let hit = rows.iter().find(|r| r["left"] == "2/7" && r["right"] == "15/28").expect("(2/7, 15/28) listed");
    assert_eq!(hit["certified"], true);
    assert_eq!(hit["epsilon"], "1/1024");
    assert!(json(&["catalog", "--max-q", "7"]).as_array().unwrap().iter().all(|r| r["certified"].is_null()));
}

#[test]
fn trap_and_word_commands() {
    assert_eq!(json(&["trap", "1/3", "2/3", "--depth", "20"])["trapped"], true);
    assert_eq!(text(&["word", "standard", "1", "2"]), "01010\n");
    assert_eq!(text(&["word", "balanced", "0011"]), "false\n");
    assert_eq!(text(&["word", "balanced", "01010"]), "true\n");
    assert_eq!(text(&["word", "extremes", "0110"]), "0011 1100\n");
    assert_eq!(text(&["word", "thue-morse", "8"]), "01101001\n");
    assert_eq!(text(&["word", "farey", "2", "5"]), "1/3 1/2\n");
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = std::env::temp_dir().join(format!("dholes-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gap.json");
    let out = dholes(&["gap", "1", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written, json(&["gap", "1", "2"]));
    assert_eq!((written["alpha"].as_str(), written["beta"].as_str()), (Some("10/31"), Some("41/124")));
    std::fs::remove_dir_all(&dir).unwrap();
}
