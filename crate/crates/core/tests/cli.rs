//! End-to-end tests of the `submon` binary: exit codes, output formats,
//! and determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let mut path = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    path.pop();
    path.pop();
    path.push("fixtures");
    path.push(name);
    path.to_string_lossy().into_owned()
}

fn submon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_submon"))
        .args(args)
        .env_remove("SUBMON_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

/// Minimal DOT validation: digraph header, balanced braces, terminated
/// statements.
fn check_dot(dot: &str) {
    assert!(dot.starts_with("digraph "), "missing digraph header");
    assert_eq!(dot.matches('{').count(), dot.matches('}').count());
    for line in dot.lines().skip(1) {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed == "}" {
            continue;
        }
        assert!(trimmed.ends_with(';'), "unterminated statement: {line}");
    }
}

#[test]
fn graded_exit_codes_and_reports() {
    let yes = submon(&["graded", &fixture("ex1.json")]);
    assert_eq!(code(&yes), 0);
    assert!(stdout(&yes).contains("graded: true"));

    let no = submon(&["graded", &fixture("ex2.json"), "--format", "json"]);
    assert_eq!(code(&no), 1);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&no)).unwrap();
    assert_eq!(parsed["graded"], serde_json::json!(false));
    assert_eq!(parsed["witness"], serde_json::json!("A"));

    let no3 = submon(&["graded", &fixture("ex3.json")]);
    assert_eq!(code(&no3), 1);

    let yes4 = submon(&["graded", &fixture("ex4.json")]);
    assert_eq!(code(&yes4), 0);
}

#[test]
fn malformed_spec_exits_2() {
    let dir = std::env::temp_dir().join("submon-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = submon(&["graded", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);

    let missing = submon(&["graded", "/nonexistent/spec.json"]);
    assert_eq!(code(&missing), 2);

    // Identity generator is rejected with a diagnostic.
    let ident = dir.join("ident.json");
    std::fs::write(&ident, r#"{"ambient_rank": 2, "generators": ["a", "aA"]}"#).unwrap();
    let out = submon(&["graded", ident.to_str().unwrap()]);
    assert_eq!(code(&out), 2);

    // Duplicate generators are rejected with a diagnostic.
    let dup = dir.join("dup.json");
    std::fs::write(&dup, r#"{"ambient_rank": 2, "generators": ["a", "a"]}"#).unwrap();
    let out = submon(&["graded", dup.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("duplicates"));
}

#[test]
fn budget_exhaustion_exits_3() {
    let out = submon(&["graded", &fixture("ex1.json"), "--budget-grammar", "3"]);
    assert_eq!(code(&out), 3);

    let out = Command::new(env!("CARGO_BIN_EXE_submon"))
        .args(["graded", &fixture("ex1.json")])
        .env("SUBMON_BUDGET", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code().unwrap(), 3);
}

#[test]
fn wp_command() {
    let yes = submon(&[
        "wp",
        &fixture("ex1.json"),
        "--cutoff",
        "6",
        "[a][b]",
        "[b][a][ABab]",
    ]);
    assert_eq!(code(&yes), 0);
    assert!(stdout(&yes).contains("member: true"));

    // Index syntax parses to the same generators.
    let yes_idx = submon(&[
        "wp",
        &fixture("ex1.json"),
        "--cutoff",
        "6",
        "[1][2]",
        "[2][1][3]",
    ]);
    assert_eq!(code(&yes_idx), 0);

    let no = submon(&["wp", &fixture("free1.json"), "[a]", "[a][a]"]);
    assert_eq!(code(&no), 1);
}

#[test]
fn normalize_command() {
    let out = submon(&["normalize", &fixture("ex1.json"), "[b][a][ABab]"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("normal_form: [a][b]"));
    assert!(text.contains("element: ab"));

    let oracle = submon(&[
        "normalize",
        &fixture("ex1.json"),
        "[b][a][ABab]",
        "--via-oracle",
    ]);
    assert!(stdout(&oracle).contains("normal_form: [a][b]"));

    // Normalization refuses non-graded inputs.
    let bad = submon(&["normalize", &fixture("ex2.json"), "[ba]"]);
    assert_eq!(code(&bad), 2);
}

#[test]
fn irreducibles_command() {
    let out = submon(&["irreducibles", &fixture("ex2.json"), "--format", "json"]);
    assert_eq!(code(&out), 0);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(
        parsed["irreducibles"],
        serde_json::json!(["ba", "c", "CA", "BA"])
    );

    let out = submon(&["irreducibles", &fixture("ex3.json")]);
    let text = stdout(&out);
    assert!(!text.lines().any(|l| l.trim() == "a"));
}

#[test]
fn factorizations_and_grammar_dump() {
    let out = submon(&[
        "factorizations",
        &fixture("ex2.json"),
        "A",
        "--max-len",
        "6",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["finite"], serde_json::json!(false));
    let words: Vec<String> = parsed["factorizations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    assert!(words.contains(&"[ba][c][CA][BA]".to_string()));
    assert!(parsed["grammar"]["nonterminals"].as_u64().unwrap() > 0);

    let dump = submon(&[
        "factorizations",
        &fixture("ex2.json"),
        "A",
        "--format",
        "grammar",
    ]);
    assert!(stdout(&dump).lines().any(|l| l.contains("->")));
}

#[test]
fn factors_command() {
    let out = submon(&["factors", &fixture("free1.json"), "aa"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("finite: true"));
    assert!(text.contains("  1"));
    assert!(text.contains("  a"));
    assert!(text.contains("  aa"));
}

#[test]
fn automaton_export_formats() {
    let dot = submon(&[
        "automaton",
        &fixture("ex1.json"),
        "--cutoff",
        "3",
        "--format",
        "dot",
    ]);
    assert_eq!(code(&dot), 0);
    check_dot(&stdout(&dot));

    let json = submon(&[
        "automaton",
        &fixture("ex1.json"),
        "--cutoff",
        "3",
        "--format",
        "json",
    ]);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(parsed["cutoff"], serde_json::json!(3));
    assert_eq!(parsed["certified"], serde_json::json!(false));

    // The certified pipeline is feasible for the rank-one fixture.
    let certified = submon(&[
        "automaton",
        &fixture("free1.json"),
        "--mode",
        "certified",
    ]);
    assert_eq!(code(&certified), 0);
    let text = stdout(&certified);
    assert!(text.contains("cutoff: 426"));
    assert!(text.contains("certified: true"));
}

#[test]
fn hom_command() {
    let yes = submon(&[
        "hom",
        &fixture("ex1.json"),
        "--map",
        "a=a",
        "--map",
        "b=b",
        "--map",
        "ABab=ABab",
    ]);
    assert_eq!(code(&yes), 0);
    assert!(stdout(&yes).contains("extends: true"));

    let no = submon(&[
        "hom",
        &fixture("ex1.json"),
        "--map",
        "a=a",
        "--map",
        "b=b",
        "--map",
        "3=b",
        "--format",
        "json",
    ]);
    assert_eq!(code(&no), 1);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&no)).unwrap();
    assert_eq!(parsed["outcome"], serde_json::json!("no"));
    assert!(parsed["witness"]["left"].is_string());

    let incomplete = submon(&["hom", &fixture("ex1.json"), "--map", "a=a"]);
    assert_eq!(code(&incomplete), 2);
}

#[test]
fn iso_command() {
    let yes = submon(&["iso", &fixture("free2.json"), &fixture("code2.json")]);
    assert_eq!(code(&yes), 0);
    assert!(stdout(&yes).contains("isomorphic: true"));

    let no = submon(&["iso", &fixture("ex1.json"), &fixture("free3.json")]);
    assert_eq!(code(&no), 1);

    let not_graded = submon(&["iso", &fixture("ex2.json"), &fixture("free2.json")]);
    assert_eq!(code(&not_graded), 2);
}

#[test]
fn constants_command_reports_exact_rationals() {
    let out = submon(&["constants", &fixture("free1.json"), "--format", "json"]);
    assert_eq!(code(&out), 0);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["c_wp"]["num"], serde_json::json!(851));
    assert_eq!(parsed["c_wp"]["den"], serde_json::json!(2));
    assert_eq!(parsed["l_prime"], serde_json::json!(3));

    // Rank-2 fixtures report the obstruction instead of a value.
    let out = submon(&["constants", &fixture("ex1.json"), "--format", "json"]);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(parsed["c_wp"].is_null());
    assert!(parsed["c_wp_obstruction"].as_str().unwrap().contains("zeta"));

    let verified = submon(&[
        "constants",
        &fixture("ex1.json"),
        "--verify-samples",
        "200",
    ]);
    assert!(stdout(&verified).contains("violations: 0"));
}

#[test]
fn reports_are_deterministic() {
    for args in [
        vec!["graded", &fixture("ex2.json"), "--format", "json"],
        vec!["constants", &fixture("free1.json"), "--format", "json"],
        vec![
            "automaton",
            &fixture("ex1.json"),
            "--cutoff",
            "4",
            "--format",
            "json",
        ],
        vec![
            "automaton",
            &fixture("ex1.json"),
            "--cutoff",
            "4",
            "--format",
            "dot",
        ],
        vec![
            "factorizations",
            &fixture("ex2.json"),
            "A",
            "--format",
            "json",
        ],
    ] {
        let first = submon(&args);
        let second = submon(&args);
        assert_eq!(stdout(&first), stdout(&second), "args {args:?}");
    }
}

#[test]
fn alternative_order_flag() {
    let out = submon(&[
        "normalize",
        &fixture("ex1.json"),
        "[a][b]",
        "--order",
        "b,a,ABab",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("normal_form: [b][a][ABab]"));
}
