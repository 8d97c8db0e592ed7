use std::fs;
use std::path::PathBuf;

use scfcheck::cli::{self, EXIT_BUDGET, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};
use scfcheck::prefcore::Profile;
use serde_json::Value;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("scfcheck").chain(args.iter().copied()), &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn records(out: &str) -> Vec<Value> {
    out.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("scfcheck-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

#[test]
fn eval_prints_the_choice_set() {
    let unanimous = temp_file("unanimous.txt", "a > b > c\na > b > c\na > b > c\n");
    let r = run(&["eval", "pareto", unanimous.to_str().unwrap()]);
    assert_eq!((r.code, r.out.as_str()), (EXIT_PASS, "{a}\n"));

    let fstar = temp_file("fstar.txt", "# first voter\nc > b > a\na > b > c\na > b > c\n");
    let r = run(&["eval", "fstar", fstar.to_str().unwrap()]);
    assert_eq!(r.out, "{a}\n");

    let named = temp_file("named.txt", "alternatives: x y z\nz > y > x\nz > x~y\n");
    assert_eq!(run(&["eval", "pareto", named.to_str().unwrap()]).out, "{z}\n");
}

#[test]
fn eval_rejects_weak_profiles_for_strict_rules() {
    let weak = temp_file("weak.txt", "a~b > c\nc > a > b\na > b > c\n");
    let r = run(&["eval", "two-star-plurality", weak.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.err.contains("strict"), "{}", r.err);
}

#[test]
fn parse_errors_name_line_and_column() {
    let bad = temp_file("bad.txt", "alternatives: a b c\n\na > b > c\na > > c\n");
    let r = run(&["eval", "pareto", bad.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.err.contains("line 4, column 4"), "{}", r.err);
}

#[test]
fn check_reports_and_exit_codes() {
    let r = run(&["check", "pareto", "strategyproof", "--m", "3", "--n", "3"]);
    assert_eq!(r.code, EXIT_PASS);
    let recs = records(&r.out);
    assert_eq!(recs[0]["record"], "header");
    assert_eq!(recs[0]["rule"], "pareto");
    assert_eq!(recs[0]["spec"]["m"], 3);
    assert_eq!(recs[1]["verdict"], "pass");
    assert!(recs[1].get("elapsed_ms").is_none());

    let r = run(&["check", "borda", "strategyproof", "--m", "3", "--n", "3", "--timing"]);
    assert_eq!(r.code, EXIT_FAIL);
    let rec = &records(&r.out)[1];
    assert_eq!(rec["verdict"], "fail");
    assert!(rec["elapsed_ms"].is_u64());
    let w = &rec["witness"];
    assert_eq!(w["kind"], "manipulation");
    // Rendered witnesses parse back to profiles of the right shape.
    for key in ["profile", "deviation"] {
        let p: Profile = w[key].as_str().unwrap().parse().unwrap();
        assert_eq!((p.m(), p.n()), (3, 3));
        assert_eq!(p.to_string(), w[key].as_str().unwrap());
    }
    let voter = w["voter"].as_u64().unwrap();
    assert!((1..=3).contains(&voter));
}

#[test]
fn check_rank_based_fails_at_four_alternatives() {
    let r = run(&["check", "pareto", "rank-based", "--m", "4", "--n", "3"]);
    assert_eq!(r.code, EXIT_FAIL);
    assert_eq!(records(&r.out)[1]["witness"]["kind"], "signature-pair");
}

#[test]
fn reports_are_reproducible() {
    let args = ["check", "borda", "strategyproof", "pareto", "--m", "3", "--n", "3", "--jobs", "1"];
    assert_eq!(run(&args).out, run(&args).out);
    let args = ["verify", "thm1", "--trace"];
    assert_eq!(run(&args).out, run(&args).out);
}

#[test]
fn usage_errors() {
    let r = run(&["check", "bord", "strategyproof", "--m", "3", "--n", "3"]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.err.contains("borda"), "{}", r.err);
    let r = run(&["check", "pareto", "strategyprof", "--m", "3", "--n", "3"]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.err.contains("strategyproof"));
    assert_eq!(run(&["check", "pareto", "--m", "3", "--n", "3"]).code, EXIT_USAGE);
    assert_eq!(run(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(run(&["verify", "thm1", "--jobs", "4"]).code, EXIT_USAGE);
    assert_eq!(run(&["verify", "no-such-scenario"]).code, EXIT_USAGE);
    assert_eq!(run(&["--help"]).code, EXIT_PASS);
}

#[test]
fn canonical_scans_need_an_anonymous_rule() {
    let args = ["check", "borda", "strategyproof", "--m", "3", "--n", "3", "--canonical"];
    assert_eq!(run(&args).code, EXIT_FAIL);
    let r = run(&["check", "dictator", "strategyproof", "--m", "3", "--n", "2", "--canonical"]);
    assert_eq!(r.code, EXIT_USAGE);
}

#[test]
fn nominators_are_one_based() {
    let r = run(&["nominators", "pareto", "--m", "3", "--n", "3"]);
    assert_eq!(records(&r.out)[1]["nominators"], serde_json::json!([1, 2, 3]));
    let r = run(&["nominators", "two-star-plurality", "--m", "3", "--n", "5", "--strict"]);
    assert_eq!(records(&r.out)[1]["nominators"], serde_json::json!([]));
}

#[test]
fn verify_reports() {
    let r = run(&["verify", "lemma1-example"]);
    assert_eq!(r.code, EXIT_PASS);
    let rec = &records(&r.out)[0];
    assert_eq!(rec["verdict"], "pass");
    assert_eq!(rec["audit"]["sound"], true);
    let forced: Vec<&Value> = rec["expectations"].as_array().unwrap().iter().collect();
    assert!(forced.iter().any(|e| e["expect"] == "R4 = {a}" && e["met"] == true));

    let r = run(&["verify", "thm4-base", "--trace"]);
    let recs = records(&r.out);
    let last = recs.last().unwrap();
    assert_eq!(last["record"], "verify");
    assert!(last["contradiction"].is_string());
    assert_eq!(recs.len() - 1, last["audit"]["steps"].as_u64().unwrap() as usize);
    assert!(recs[..recs.len() - 1].iter().all(|s| s["record"] == "step"));
}

#[test]
fn verify_mismatch_shows_candidates_and_trace_tail() {
    let text = run(&["scenario", "lemma1-example"]).out.replace("expect: R7 = {b}", "expect: R7 = {c}");
    let path = temp_file("wrong.scn", &text);
    let r = run(&["verify", "--file", path.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_FAIL);
    let recs = records(&r.out);
    assert_eq!(recs[0]["verdict"], "fail");
    let miss = recs[0]["expectations"].as_array().unwrap().iter().find(|e| e["met"] == false).unwrap();
    assert_eq!(miss["observed"], "{b}");
    assert!(recs.len() > 1 && recs[1..].iter().all(|s| s["record"] == "step"));
}

#[test]
fn verify_budget_exhaustion_exits_three() {
    let text = run(&["scenario", "pairwise-exhaustive"]).out.replace("axioms: strategyproof", "axioms:");
    let path = temp_file("no-sp.scn", &text);
    let r = run(&["verify", "--file", path.to_str().unwrap(), "--budget", "10"]);
    assert_eq!(r.code, EXIT_BUDGET, "{}", r.out);
    assert_eq!(records(&r.out)[0]["verdict"], "budget-exceeded");
}

#[test]
fn scenario_text_round_trips_through_verify() {
    for name in ["thm1", "thm2-n4", "thmC1"] {
        let text = run(&["scenario", name]).out;
        let path = temp_file(&format!("{name}.scn"), &text);
        assert_eq!(run(&["verify", "--file", path.to_str().unwrap()]).code, EXIT_PASS, "{name}");
    }
}

#[test]
fn matrices() {
    let r1 = temp_file("r1.txt", "alternatives: a b c d\na~b > c~d\nc~d > a~b\na > b~c~d\n");
    let r2 = temp_file("r2.txt", "alternatives: a b c d\na~c > b~d\nb~d > a~c\na > b~c~d\n");
    let rank = |p: &PathBuf| run(&["matrix", p.to_str().unwrap(), "rank"]).out;
    assert_eq!(rank(&r1), rank(&r2));
    assert_ne!(
        run(&["matrix", r1.to_str().unwrap(), "support"]).out,
        run(&["matrix", r2.to_str().unwrap(), "support"]).out
    );

    let f1 = temp_file("f1.txt", "alternatives: a b c\nc > b > a\na > b > c\na > b > c\n");
    let f2 = temp_file("f2.txt", "alternatives: a b c\nc > a > b\nb > a > c\na > b > c\n");
    let support = |p: &PathBuf| run(&["matrix", p.to_str().unwrap(), "support"]).out;
    assert_eq!(support(&f1), support(&f2));

    let tied = temp_file("tied.txt", "a > b\nb > a\n");
    let margins = run(&["matrix", tied.to_str().unwrap(), "margins"]).out;
    assert_eq!(margins, "  a b\na - 0\nb 0 -\n");

    // Without a header, names are indexed by first appearance.
    let named = temp_file("named-m.txt", "y > x\ny > x\n");
    let out = run(&["matrix", named.to_str().unwrap(), "support"]).out;
    assert_eq!(out, "alternatives: a=y b=x\n  a b\na - 2\nb 0 -\n");
}

#[test]
fn listings() {
    let r = run(&["rules"]);
    let names: Vec<String> =
        records(&r.out).iter().map(|v| v["name"].as_str().unwrap().to_string()).collect();
    for n in ["pareto", "omninomination", "borda", "two-star-plurality", "fstar"] {
        assert!(names.iter().any(|x| x == n), "{n}");
    }
    let r = run(&["scenarios"]);
    assert!(records(&r.out).iter().any(|v| v["alias"] == "thm1"));
}
