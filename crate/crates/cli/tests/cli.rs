use std::path::PathBuf;
use std::process::{Command, Output};

fn ablp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ablp")).args(args).output().expect("run ablp")
}

fn program(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "programs", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_tmp(name: &str, text: &str) -> String {
    let p = std::env::temp_dir().join(format!("ablp-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn transform_subcheck_prints_constraint_rules() {
    let o = ablp(&["transform", &program("running.ablp"), "--ic-mode", "subcheck"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("U*1 :- assert_IC([q(X),r(X)])."), "{out}");
    assert!(out.contains("U* :- U*1, U*2."), "{out}");
    assert!(!out.contains("not_false"));
    assert!(out.contains("holds=true"));
}

#[test]
fn transform_dual_prints_not_false() {
    let o = ablp(&["transform", &program("running.ablp"), "--ic-mode", "dual"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("not_false(I,O) :- false*1(I,T), false*2(T,O)."));
}

#[test]
fn malformed_input_exits_one_with_position() {
    let path = write_tmp("bad.ablp", "p(X) :- q(X).\nr(X :- s.\n");
    let o = ablp(&["transform", &path]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":2:"));
}

#[test]
fn solve_running_example() {
    let o = ablp(&["solve", &program("running.ablp"), "--query", "p(0)"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    let rec: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(rec["type"], "solution");
    assert_eq!(rec["context"], serde_json::json!(["q(0)", "q(1)", "not t(0)"]));
    let m: serde_json::Value = serde_json::from_str(lines[1]).unwrap();
    assert_eq!(m["type"], "metrics");
}

#[test]
fn solve_with_violating_context_exits_three() {
    let o = ablp(&["solve", &program("running.ablp"), "--query", "p(0)", "--context", "r(1)"]);
    assert_eq!(o.status.code(), Some(3));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1, "{out}");
}

#[test]
fn budget_exhaustion_exits_four() {
    let o = ablp(&["solve", &program("running.ablp"), "--query", "p(0)", "--max-steps", "1"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn env_var_sets_budget() {
    let o = Command::new(env!("CARGO_BIN_EXE_ablp"))
        .args(["solve", &program("running.ablp"), "--query", "p(0)"])
        .env("ABLP_MAX_STEPS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn bench_exp1_has_ten_rows_per_mode() {
    let o = ablp(&["bench", "exp1", "--n", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.iter().filter(|r| r.contains(",normal,")).count(), 10);
    assert_eq!(rows.iter().filter(|r| r.contains(",reduce,")).count(), 10);
}

#[test]
fn bench_is_deterministic_apart_from_wall_time() {
    let strip = |o: Output| -> Vec<String> {
        stdout(&o)
            .lines()
            .map(|l| {
                let mut f: Vec<&str> = l.split(',').collect();
                f.remove(12);
                f.join(",")
            })
            .collect()
    };
    let a = strip(ablp(&["bench", "exp3", "--n", "3"]));
    let b = strip(ablp(&["bench", "exp3", "--n", "3"]));
    assert_eq!(a, b);
}

#[test]
fn check_running_example_agrees() {
    let o = ablp(&["check", &program("running.ablp"), "--query", "p(0)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("agree\n"));
}

#[test]
fn check_reports_mismatch() {
    // the prefixed dual of d only yields [a, b]; [b] alone is also minimal
    let path = write_tmp("mismatch.ablp", "abducible a/0, b/0.\nd :- a, not b.\n");
    let o = ablp(&["check", &path, "--query", "not d"]);
    assert_eq!(o.status.code(), Some(5));
    let out = stdout(&o);
    assert!(out.contains("engine only: [a,b]"), "{out}");
    assert!(out.contains("oracle only: [b]"), "{out}");
}

#[test]
fn unknown_flag_exits_one() {
    assert_eq!(ablp(&["solve", "--bogus"]).status.code(), Some(1));
}
