//! The `catlogic` binary: exit codes, report shape and replayable failures.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catlogic")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["oracle", "--help"])), 0);
    assert_eq!(code(&run(&[])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["--format", "yaml", "classify", &data("c2.json")])), 2);
    assert_eq!(code(&run(&["oracle", "--check", "bogus"])), 2);
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(code(&run(&["classify", "no/such/file.json"])), 2);
    assert_eq!(code(&run(&["classify", &data("kernel.ppc")])), 2);
    assert_eq!(code(&run(&["pp", "implies", "--ring", "z4", "x = ", "x = 0"])), 2);
    assert_eq!(code(&run(&["pp", "implies", "--ring", "q7", "x = 0", "x = 0"])), 2);
}

#[test]
fn classify_reports_the_two_element_chain_as_exact() {
    let o = run(&["classify", &data("c2.json")]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["command"][1], "classify");
    assert_eq!(r["passed"], true);
    let res = &r["result"];
    assert_eq!((res["is_lex"].clone(), res["is_regular"].clone(), res["is_exact"].clone()), (true.into(), true.into(), true.into()));
    assert_eq!(res["terminal"], "1");
}

#[test]
fn pp_implication_exit_codes() {
    let yes = run(&["pp", "implies", "--ring", "z4", "x = 0", "2*x = 0"]);
    assert_eq!(code(&yes), 0);
    assert_eq!(report(&yes)["result"]["implies"], true);
    let no = run(&["pp", "implies", "--ring", "z4", "2*x = 0", "x = 0"]);
    assert_eq!(code(&no), 1);
    let r = report(&no);
    assert_eq!(r["result"]["implies"], false);
    assert!(r["result"]["witness"].is_object());
    assert!(r["checks"][0]["failures"][0]["replay"].as_str().unwrap().starts_with("catlogic pp implies"));
}

#[test]
fn scripts_and_text_format() {
    let o = run(&["--format", "text", "ppcat", "run", &data("kernel.ppc")]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("PASS script")), "{text}");
    assert!(text.trim_end().ends_with("all checks passed"));
}

#[test]
fn oracle_reports_are_byte_identical_and_seeded() {
    let args = ["--seed", "3", "oracle", "--check", "sheaf", "--check", "exactness", "--budget", "30"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    let ids: Vec<&str> = r["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["exactness", "sheaf"]);
    assert_eq!(r["result"]["seed"], 3);
    assert!(r.get("wall_time_ms").is_none());
    let timed = report(&run(&["--timing", "oracle", "--budget", "0"]));
    assert!(timed["wall_time_ms"].is_u64());
    assert_eq!(timed["checks"].as_array().unwrap().len(), 14);
}

#[test]
fn out_writes_the_report_to_a_file() {
    let path = std::env::temp_dir().join(format!("catlogic-cli-{}.json", std::process::id()));
    let o = run(&["--out", path.to_str().unwrap(), "classify", &data("c2.json")]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["result"]["is_exact"], true);
    let _ = std::fs::remove_file(path);
}
