//! Plain-text scenario files.
//!
//! ```text
//! scenario: example
//! m: 3
//! n: 2
//! axioms: strategyproof pareto
//! seed: R1 = {a}
//! expect: R2 = {a}
//!
//! profile R1:
//!   a > b > c
//!   a > c > b
//! ```
//!
//! Header lines are `key: value`. A `profile <label>:` line opens a block
//! of order lines, one per voter. Blank lines and `#` comments are ignored.

use std::fmt::Write as _;

use super::candidates::CandidateSet;
use super::scenario::{parse_order, Deduction, Expectation, License, Mode, Scenario, Seed};
use crate::enumeration::DomainSpec;
use crate::error::{Error, Result};
use crate::prefcore::{ChoiceSet, Profile, WeakOrder};

pub fn render(s: &Scenario) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario: {}", s.name);
    if let Some(summary) = &s.summary {
        let _ = writeln!(out, "summary: {}", summary.replace('\n', " "));
    }
    let _ = writeln!(out, "m: {}", s.m());
    let _ = writeln!(out, "n: {}", s.n());
    let axioms: Vec<&str> = s.axioms.iter().map(|d| d.key()).collect();
    let _ = writeln!(out, "axioms: {}", axioms.join(" "));
    let _ = writeln!(out, "license: {}", s.license.key());
    let _ = writeln!(out, "mode: {}", s.mode.key());
    let mut domain = vec![if s.full_domain { "full" } else { "listed" }];
    if s.spec.strict_only {
        domain.push("strict");
    }
    if s.spec.exclude_indifferent {
        domain.push("no-indifferent");
    }
    let _ = writeln!(out, "domain: {}", domain.join(" "));
    if let Some(c) = s.collapse {
        let _ = writeln!(out, "collapse: {c}");
    }
    if let Some(b) = s.budget {
        let _ = writeln!(out, "budget: {b}");
    }
    for seed in &s.seeds {
        match seed.sets.single() {
            Some(x) => {
                let _ = writeln!(out, "seed: {} = {x}", seed.label);
            }
            None => {
                let _ = writeln!(out, "seed: {} in {}", seed.label, seed.sets);
            }
        }
    }
    for e in &s.expect {
        let _ = writeln!(out, "expect: {e}");
    }
    for (label, p) in &s.profiles {
        let _ = writeln!(out, "\nprofile {label}:");
        for v in p.voters() {
            let _ = writeln!(out, "  {v}");
        }
    }
    out
}

struct Partial {
    label: String,
    line: usize,
    voters: Vec<WeakOrder>,
}

pub fn parse(text: &str) -> Result<Scenario> {
    let mut name = None;
    let mut summary = None;
    let (mut m, mut n) = (None, None);
    let mut axioms = Vec::new();
    let mut license = License::Assumed;
    let mut mode = Mode::Propagate;
    let mut collapse = None;
    let mut full_domain = false;
    let (mut strict, mut no_indifferent) = (false, false);
    let mut budget = None;
    let mut seeds = Vec::new();
    let mut expect = Vec::new();
    let mut blocks: Vec<Partial> = Vec::new();

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let indent = raw.len() - raw.trim_start().len();
        let Some(colon) = trimmed.find(':') else {
            let m = m.ok_or_else(|| Error::parse(line, indent + 1, "`m:` must come before profiles"))?;
            let block = blocks
                .last_mut()
                .ok_or_else(|| Error::parse(line, indent + 1, "order line outside a profile block"))?;
            let order = parse_order(trimmed, m).map_err(|e| relocate(e, line, indent))?;
            block.voters.push(order);
            continue;
        };
        let key = trimmed[..colon].trim();
        let value = trimmed[colon + 1..].trim();
        let value_col =
            indent + colon + 2 + (trimmed[colon + 1..].len() - trimmed[colon + 1..].trim_start().len());
        let bad = |msg: String| Error::parse(line, value_col, msg);
        if let Some(label) = key.strip_prefix("profile ") {
            let label = label.trim();
            check_label(label).map_err(|msg| Error::parse(line, indent + 9, msg))?;
            if !value.is_empty() {
                return Err(bad("nothing may follow `profile <label>:`".into()));
            }
            blocks.push(Partial { label: label.to_string(), line, voters: Vec::new() });
            continue;
        }
        match key {
            "scenario" => name = Some(value.to_string()),
            "summary" => summary = Some(value.to_string()),
            "m" => m = Some(value.parse::<usize>().map_err(|_| bad(format!("`{value}` is not a number")))?),
            "n" => n = Some(value.parse::<usize>().map_err(|_| bad(format!("`{value}` is not a number")))?),
            "axioms" => {
                for tok in value.split_whitespace() {
                    axioms.push(tok.parse::<Deduction>().map_err(|e| bad(e.to_string()))?);
                }
            }
            "license" => license = value.parse().map_err(|e: Error| bad(e.to_string()))?,
            "mode" => mode = value.parse().map_err(|e: Error| bad(e.to_string()))?,
            "collapse" => collapse = Some(value.parse::<Deduction>().map_err(|e| bad(e.to_string()))?),
            "budget" => {
                budget = Some(value.parse::<u64>().map_err(|_| bad(format!("`{value}` is not a number")))?)
            }
            "domain" => {
                for tok in value.split_whitespace() {
                    match tok {
                        "full" => full_domain = true,
                        "listed" => full_domain = false,
                        "strict" => strict = true,
                        "no-indifferent" => no_indifferent = true,
                        _ => return Err(bad(format!("unknown domain option `{tok}`"))),
                    }
                }
            }
            "seed" => seeds.push(parse_seed(value).map_err(bad)?),
            "expect" => expect.push(parse_expectation(value).map_err(bad)?),
            _ => return Err(Error::parse(line, indent + 1, format!("unknown key `{key}`"))),
        }
    }

    let m = m.ok_or_else(|| Error::parse(1, 1, "missing `m:`"))?;
    let n = n.ok_or_else(|| Error::parse(1, 1, "missing `n:`"))?;
    let mut spec = if strict { DomainSpec::strict(m, n) } else { DomainSpec::weak(m, n) };
    if no_indifferent {
        spec = spec.excluding_indifferent();
    }
    let mut profiles = Vec::new();
    for b in blocks {
        if b.voters.len() != n {
            return Err(Error::parse(
                b.line,
                1,
                format!("profile `{}` has {} voters, expected {n}", b.label, b.voters.len()),
            ));
        }
        profiles.push((b.label, Profile::new(b.voters)?));
    }
    axioms.sort();
    axioms.dedup();
    let scenario = Scenario {
        name: name.ok_or_else(|| Error::parse(1, 1, "missing `scenario:`"))?,
        summary,
        spec,
        axioms,
        license,
        seeds,
        expect,
        mode,
        collapse,
        full_domain,
        budget,
        profiles,
    };
    scenario.validate()?;
    Ok(scenario)
}

fn relocate(e: Error, line: usize, indent: usize) -> Error {
    match e {
        Error::Parse { column, message, .. } => Error::parse(line, column + indent, message),
        other => other,
    }
}

fn check_label(label: &str) -> std::result::Result<(), String> {
    let ok = !label.is_empty()
        && label.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '\'' | '-' | '+'));
    if ok {
        Ok(())
    } else {
        Err(format!("`{label}` is not a valid profile label"))
    }
}

fn parse_sets(s: &str) -> std::result::Result<CandidateSet, String> {
    let mut out = CandidateSet::EMPTY;
    for part in s.split('|') {
        let x: ChoiceSet = part.trim().parse().map_err(|e: Error| e.to_string())?;
        out = out.union(CandidateSet::only(x));
    }
    Ok(out)
}

fn parse_seed(value: &str) -> std::result::Result<Seed, String> {
    let (label, rest) = value
        .split_once(char::is_whitespace)
        .ok_or_else(|| "expected `<label> = <set>` or `<label> in <set> | ...`".to_string())?;
    check_label(label)?;
    let rest = rest.trim_start();
    let sets = if let Some(s) = rest.strip_prefix('=') {
        parse_sets(s)?
    } else if let Some(s) = rest.strip_prefix("in ") {
        parse_sets(s)?
    } else if let Some(s) = rest.strip_prefix("within ") {
        let x: ChoiceSet = s.trim().parse().map_err(|e: Error| e.to_string())?;
        CandidateSet::subsets_of(x)
    } else {
        return Err("expected `=`, `in` or `within` after the label".into());
    };
    Ok(Seed { label: label.to_string(), sets })
}

fn parse_expectation(value: &str) -> std::result::Result<Expectation, String> {
    match value {
        "contradiction" => Ok(Expectation::Contradiction),
        "unsat" => Ok(Expectation::Unsatisfiable),
        "sat" => Ok(Expectation::Satisfiable),
        _ => {
            let (label, set) =
                value.split_once('=').ok_or_else(|| format!("unknown expectation `{value}`"))?;
            let label = label.trim();
            check_label(label)?;
            let set = set.trim().parse().map_err(|e: Error| e.to_string())?;
            Ok(Expectation::Forced { label: label.to_string(), set })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# two voters
scenario: sample
m: 3
n: 2
axioms: pareto strategyproof
seed: R1 within {a,b}
expect: R2 = {a}

profile R1:
  a > b > c
  a~b > c
profile R2:
  a > b > c
  a > c > b
";

    #[test]
    fn parses_and_round_trips() {
        let s = parse(SAMPLE).unwrap();
        assert_eq!(s.name, "sample");
        assert_eq!(s.axioms, [Deduction::Strategyproof, Deduction::Pareto]);
        assert_eq!(s.seeds[0].sets.len(), 3);
        assert_eq!(s.profiles.len(), 2);
        let again = parse(&render(&s)).unwrap();
        assert_eq!(again, s);
        assert_eq!(render(&again), render(&s));
    }

    #[test]
    fn errors_carry_positions() {
        let bad = SAMPLE.replace("a~b > c", "a~b > q");
        match parse(&bad) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (11, 9)),
            other => panic!("{other:?}"),
        }
        let bad = SAMPLE.replace("axioms: pareto", "axioms: paretto");
        assert!(matches!(parse(&bad), Err(Error::Parse { line: 5, .. })));
        let bad = SAMPLE.replace("  a > c > b\n", "");
        assert!(matches!(parse(&bad), Err(Error::Parse { line: 12, .. })));
        assert!(parse("scenario: x\nn: 2\n").is_err());
    }
}
