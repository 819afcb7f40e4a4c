use std::path::Path;
use std::process::{Command, Output};

use satgadgets::dimacs::{emit_dimacs, parse_dimacs};
use satgadgets::generate;
use satgadgets::witnesses::{known_unsat, KnownUnsat};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_satgadgets"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(stdout(o).trim()).expect("one JSON document")
}

#[test]
fn witness_round_trips_and_solves_unsat() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("nine_var.cnf");
    let o = run(&["witness", "nine_var", "--out", path(&file)]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&file).unwrap();
    assert_eq!(parse_dimacs(&text).unwrap(), known_unsat(KnownUnsat::NineVar));

    let o = run(&["solve", "--engine", "exhaustive", path(&file)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "UNSAT");
}

#[test]
fn mon51_header() {
    let o = run(&["witness", "mon51"]);
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "p cnf 102 204"));
    assert_eq!(text.lines().filter(|l| l.ends_with(" 0")).count(), 204);
}

#[test]
fn witness_certify_reports() {
    for name in ["ss_bar", "nine_var", "hitting27", "mon51"] {
        let o = run(&["--json", "witness", name, "--certify"]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        let v = json(&o);
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["passed"], true);
    }
}

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("f.cnf");
    std::fs::write(&file, emit_dimacs(&known_unsat(KnownUnsat::NineVar))).unwrap();

    assert_eq!(
        run(&["check", "--variant", "mono-sat-p3q3", path(&file)]).status.code(),
        Some(0)
    );
    let o = run(&["--json", "check", "--variant", "mono-nae-e4-linear", path(&file)]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["report"]["passed"], false);
    assert_eq!(v["report"]["witness"]["violation"], "negated_literal");

    // No spec anywhere.
    assert_eq!(run(&["check", path(&file)]).status.code(), Some(2));
    assert_eq!(
        run(&["check", "--variant", "mono-sat-pxq", path(&file)]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["check", "--variant", "sat", "/nonexistent.cnf"]).status.code(),
        Some(2)
    );
}

#[test]
fn check_uses_the_declared_variant() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("f.cnf");
    std::fs::write(&file, "c variant mono-nae\np cnf 3 1\n1 2 3 0\n").unwrap();
    assert_eq!(run(&["check", path(&file)]).status.code(), Some(0));
}

#[test]
fn malformed_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("f.cnf");
    std::fs::write(&file, "c mode nae\np cnf 2 1\n1 1 2 0\n").unwrap();
    let o = run(&["solve", path(&file)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn solve_sat_prints_a_model() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("f.cnf");
    std::fs::write(&file, "p cnf 3 2\n1 2 3 0\n-1 -2 -3 0\n").unwrap();
    for engine in ["exhaustive", "dpll", "auto"] {
        let o = run(&["--json", "solve", "--engine", engine, path(&file)]);
        assert_eq!(o.status.code(), Some(0));
        let v = json(&o);
        assert_eq!(v["status"], "sat");
        let values: Vec<bool> = serde_json::from_value(v["model"].clone()).unwrap();
        assert!(values.iter().any(|&b| b) && values.iter().any(|&b| !b));
    }
}

#[test]
fn reduce_writes_output_and_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.cnf");
    let out = dir.path().join("out.cnf");
    let cert = dir.path().join("cert.json");
    let inst = generate::monotone_pq(6, 3, 2, &mut generate::rng(3)).unwrap();
    std::fs::write(&input, emit_dimacs(&inst)).unwrap();

    let o = run(&[
        "--json",
        "reduce",
        "--id",
        "R12",
        "--in",
        path(&input),
        "--out",
        path(&out),
        "--cert",
        path(&cert),
        "--verify",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert!(v["reports"].as_array().unwrap().iter().all(|r| r["passed"] == true));

    // The output carries its variant, so `check` needs no flag.
    assert_eq!(run(&["check", path(&out)]).status.code(), Some(0));
    let c: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(c["id"], "R12");
    assert!(!c["back_map"].as_array().unwrap().is_empty());
}

#[test]
fn reduce_rejections() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.cnf");
    let out = dir.path().join("out.cnf");
    std::fs::write(&input, emit_dimacs(&known_unsat(KnownUnsat::NineVar))).unwrap();
    // Wrong input variant.
    assert_eq!(
        run(&["reduce", "--id", "R12", "--in", path(&input), "--out", path(&out)])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["reduce", "--id", "R99", "--in", path(&input), "--out", path(&out)])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["reduce", "--id", "R5"]).status.code(), Some(2));
}

#[test]
fn gadgets_list_and_verify() {
    let o = run(&["gadgets", "list"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 21);

    let o = run(&["gadgets", "verify", "NE9"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS gadget NE9"));
    assert_eq!(run(&["gadgets", "verify", "NOPE"]).status.code(), Some(2));
}

#[test]
fn gadgets_verify_all_one_line_each() {
    let o = run(&["gadgets", "verify", "ALL"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 20);
    assert!(out.lines().all(|l| l.starts_with("PASS gadget ")));
}

#[test]
fn search_unsat_small() {
    let dir = tempfile::tempdir().unwrap();
    let journal = dir.path().join("j.jsonl");
    let o = run(&[
        "--json",
        "search-unsat",
        "--profile",
        "2,2",
        "--max-n",
        "3",
        "--journal",
        path(&journal),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["found"], serde_json::Value::Null);
    assert_eq!(v["runs"][0]["exhausted"], true);
    assert_eq!(v["claims"].as_array().unwrap().len(), 1);
    assert!(std::fs::read_to_string(&journal).unwrap().lines().count() >= 3);

    assert_eq!(run(&["search-unsat", "--profile", "7,7"]).status.code(), Some(2));
    assert_eq!(
        run(&["search-unsat", "--min-n", "9", "--max-n", "6"]).status.code(),
        Some(2)
    );
}
