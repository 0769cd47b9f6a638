//! Runs the `unfolder` binary: golden listings, exit codes and JSON output.
//! `UPDATE_GOLDENS=1 cargo test -p unfolder-cli` rewrites the goldens.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/../unfolder/fixtures/{name}.ufl", env!("CARGO_MANIFEST_DIR"))
}

fn unfolder(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unfolder")).args(args).env_remove("UNFOLDER_FUEL").output().expect("binary runs")
}

fn with_input(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_unfolder"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn temp(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("unfolder-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn golden(name: &str, args: &[&str]) {
    let o = unfolder(args);
    assert!(o.status.success(), "{args:?}: {}", stderr(&o));
    let got = stdout(&o);
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.txt"));
    if std::env::var_os("UPDATE_GOLDENS").is_some() {
        std::fs::write(&path, &got).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(got, want, "{name}");
}

#[test]
fn unfold_listings_match_goldens() {
    golden("add", &["unfold", "--steps", "2", &fixture("add")]);
    golden("filter", &["unfold", "--steps", "2", &fixture("filter")]);
    golden("senior", &["unfold", "--steps", "2", &fixture("senior")]);
    golden("senior_deferred", &["unfold", "--steps", "3", "--defer-comparisons", &fixture("senior")]);
    golden("traces", &["unfold", "--steps", "4", &fixture("traces")]);
    golden("traces_positions", &["unfold", "--steps", "1", "--positions", "--bots", &fixture("traces")]);
    golden("rev", &["unfold", "--steps", "3", &fixture("rev")]);
    golden("ones", &["unfold", "--steps", "3", &fixture("ones")]);
    golden("lazy_general", &["unfold", "--steps", "3", "--clean-mode", "general", &fixture("lazy")]);
    golden("parity_abstract", &["abstract", &fixture("parity")]);
}

#[test]
fn first_listing_of_addition() {
    let out = stdout(&unfolder(&["unfold", "--steps", "2", &fixture("add")]));
    assert!(out.contains("I1:\n* add(Suc(b),c) = Suc(Bot) <R2>\n* add(Zero,b) = b <R1>\n"), "{out}");
    assert!(out.contains("* add(Suc(Zero),b) = Suc(b) <R2,R1>"));
}

#[test]
fn run_with_verification() {
    let o = unfolder(&["run", "--verify", "main", &fixture("ones")]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1\nverify OK\n");
    let o = unfolder(&["run", "--verify", "--strategy", "random", "--seed", "9", "rev([1,2,3])", &fixture("rev")]);
    assert_eq!(stdout(&o), "Cons(3,Cons(2,Cons(1,Nil)))\nverify OK\n");
}

#[test]
fn fuel_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_unfolder")).args(["run", "--verify", "main", &fixture("ones")]).env("UNFOLDER_FUEL", "1").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("verify FAILED: no normal form within 1 rewriting steps"), "{}", stdout(&o));
    let o = unfolder(&["run", "--fuel", "0", "main", &fixture("ones")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_reports_violations() {
    let bad = temp("bad.ufl", "f x = 1\nf y = 2\n");
    let o = unfolder(&["check", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("violation R2: rules R1 and R2 of f overlap"), "{}", stdout(&o));
    let o = unfolder(&["check", &fixture("rev")]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("clean mode: optimized"));
    let o = unfolder(&["check", &fixture("ones")]);
    assert!(stdout(&o).contains("clean mode: general"));
}

#[test]
fn errors_and_usage() {
    let o = unfolder(&["check", "/no/such/file.ufl"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: /no/such/file.ufl"));
    let broken = temp("broken.ufl", "f x = 1\ng = (\n");
    let o = unfolder(&["unfold", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("parse error at 2:"), "{}", stderr(&o));
    assert_eq!(unfolder(&["unfold"]).status.code(), Some(2));
    assert_eq!(unfolder(&["unfold", "--steps", "0", &fixture("add")]).status.code(), Some(2));
    assert_eq!(unfolder(&["frobnicate"]).status.code(), Some(2));
    let o = unfolder(&["run", "main(", &fixture("lazy")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: goal:"));
}

#[test]
fn json_outputs_carry_the_schema() {
    for args in [
        vec!["unfold", "--json", "--steps", "2"],
        vec!["run", "--output", "json", "--verify", "main"],
        vec!["check", "--json"],
        vec!["trace", "--json", "main"],
        vec!["coverage", "--json"],
    ] {
        let mut args = args.clone();
        let f = fixture("ones");
        args.push(&f);
        let o = unfolder(&args);
        let v: Value = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        assert_eq!(v["schema"], 1, "{args:?}");
    }
    let o = unfolder(&["unfold", "--json", "--steps", "2", &fixture("add")]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["interpretations"][1]["facts"][1]["head"], "add(Zero,b)");
    assert_eq!(v["mode"], "optimized");
}

#[test]
fn traces_of_a_goal() {
    let o = unfolder(&["trace", "goal2", &fixture("traces")]);
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "* goal2 = 20 <Goal2,F2,F,G,H,F,G,H>"), "{out}");
    let o = unfolder(&["trace", "goal3", "--bots", "--positions", &fixture("traces")]);
    assert!(stdout(&o).contains("* goal3 = K(6) <Goal3@e,J@1>"), "{}", stdout(&o));
}

#[test]
fn coverage_table() {
    let out = stdout(&unfolder(&["coverage", "--steps", "3", &fixture("rev")]));
    assert!(out.contains("I1          50.0%      50.0%      50.0%"), "{out}");
    assert!(out.contains("I3         100.0%     100.0%     100.0%"));
    assert!(out.ends_with("test set:\n  rev(Cons(b,Cons(c,Nil)))\n"));
}

#[test]
fn terminal_debugging() {
    let o = with_input(&["debug", "main24", &fixture("addb")], "w\nwrong\nc\n");
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("root: main24 = Suc(Suc(Suc(Zero))) <M24>\n"));
    assert!(out.ends_with("Blamed: A3\n"), "{out}");
    let o = with_input(&["debug", "main24", &fixture("addb")], "maybe\nc\n");
    assert!(stdout(&o).contains("answer c or w"));
    assert!(stdout(&o).ends_with("No error found\n"));
    let o = with_input(&["debug", "main24", &fixture("addb")], "w\n");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn abstract_with_a_separate_spec() {
    let src = std::fs::read_to_string(fixture("parity")).unwrap();
    let (program, cata) = src.split_once("cata\n").unwrap();
    let p = temp("parity_plain.ufl", program);
    let spec = temp("parity_spec.ufl", cata);
    let o = unfolder(&["abstract", "--spec", spec.to_str().unwrap(), p.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), stdout(&unfolder(&["abstract", &fixture("parity")])));
    let o = unfolder(&["abstract", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}
