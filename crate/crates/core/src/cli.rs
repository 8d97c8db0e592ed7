//! Command-line front end.
//!
//! Reports are JSON lines on stdout, one record per check or deduction step;
//! diagnostics go to stderr. Voters are numbered from 1 in every report.
//! Exit codes: 0 pass, 1 fail, 2 usage or input error, 3 search budget
//! exhausted.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::axioms::{Axiom, CheckOptions, CheckResult, Checker, Verdict, Witness};
use crate::enumeration::DomainSpec;
use crate::error::{Error, Result};
use crate::prefcore::{ChoiceSet, Profile, MAX_ALTERNATIVES};
use crate::proofreplay::{self, text, Scenario, SolveOutcome, Step, StepKind, Verification};
use crate::rules::{self, Rule};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Deduction steps shown when a replay misses its expectation.
const TRACE_TAIL: usize = 12;

#[derive(Parser, Debug)]
#[command(
    name = "scfcheck",
    version,
    about = "Axiom checks and proof replay for set-valued social choice functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Clone, Copy)]
struct SpecArgs {
    /// Number of alternatives.
    #[arg(long)]
    m: usize,
    /// Number of voters.
    #[arg(long)]
    n: usize,
    /// Strict orders only.
    #[arg(long)]
    strict: bool,
    /// Leave out the order in which all alternatives are tied.
    #[arg(long)]
    exclude_indifferent: bool,
}

impl SpecArgs {
    fn spec(self) -> DomainSpec {
        let spec =
            if self.strict { DomainSpec::strict(self.m, self.n) } else { DomainSpec::weak(self.m, self.n) };
        if self.exclude_indifferent {
            spec.excluding_indifferent()
        } else {
            spec
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a rule on the profile in a file.
    Eval { rule: String, file: PathBuf },
    /// Check one or more axioms for a rule over a whole domain.
    Check {
        rule: String,
        #[arg(required = true)]
        axioms: Vec<String>,
        #[command(flatten)]
        spec: SpecArgs,
        /// Worker threads; 0 picks one per core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Scan one profile per voter-permutation class. Requires an anonymous rule.
        #[arg(long)]
        canonical: bool,
        /// Include wall-clock times in the report.
        #[arg(long)]
        timing: bool,
    },
    /// List the voters whose top class always meets the outcome.
    Nominators {
        rule: String,
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Replay a scenario, or every library scenario when none is named.
    Verify {
        scenario: Option<String>,
        /// Read the scenario from a file instead of the library.
        #[arg(long, conflicts_with = "scenario")]
        file: Option<PathBuf>,
        /// Node budget for scenarios that search.
        #[arg(long)]
        budget: Option<u64>,
        /// Emit every deduction step.
        #[arg(long)]
        trace: bool,
        /// Replay is sequential; only 1 is accepted.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        timing: bool,
    },
    /// Print a library scenario in the scenario file format.
    Scenario { name: String },
    /// Print a matrix derived from the profile in a file.
    Matrix { file: PathBuf, which: MatrixKind },
    /// List the registered rules.
    Rules,
    /// List the library scenarios.
    Scenarios,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MatrixKind {
    Rank,
    Support,
    Majority,
    Margins,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let mut ctx = Context { out, echo };
    match ctx.dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "scfcheck: {e}");
            EXIT_USAGE
        }
    }
}

struct Context<'a> {
    out: &'a mut dyn Write,
    echo: Vec<String>,
}

impl Context<'_> {
    fn emit<T: Serialize>(&mut self, record: &T) -> Result<()> {
        let line = serde_json::to_string(record).map_err(|e| Error::Domain(e.to_string()))?;
        writeln!(self.out, "{line}").map_err(io_error)
    }

    fn line(&mut self, s: &str) -> Result<()> {
        writeln!(self.out, "{s}").map_err(io_error)
    }

    fn dispatch(&mut self, command: Command) -> Result<i32> {
        match command {
            Command::Eval { rule, file } => self.eval(&rule, &file),
            Command::Check { rule, axioms, spec, jobs, canonical, timing } => self.check(
                &rule,
                &axioms,
                spec.spec(),
                CheckOptions { jobs, canonical_only: canonical },
                timing,
            ),
            Command::Nominators { rule, spec, jobs } => self.nominators(&rule, spec.spec(), jobs),
            Command::Verify { scenario, file, budget, trace, jobs, timing } => {
                if jobs != 1 {
                    return Err(Error::Domain(
                        "verify runs sequentially so traces are reproducible; use --jobs 1".into(),
                    ));
                }
                let scenarios = match (scenario, file) {
                    (_, Some(path)) => vec![text::parse(&read(&path)?)?],
                    (Some(name), None) => vec![proofreplay::scenario(&name)?],
                    (None, None) => {
                        proofreplay::library().iter().map(|e| (e.build)()).collect::<Result<_>>()?
                    }
                };
                self.verify(&scenarios, budget, trace, timing)
            }
            Command::Scenario { name } => {
                let s = proofreplay::scenario(&name)?;
                write!(self.out, "{}", text::render(&s)).map_err(io_error)?;
                Ok(EXIT_PASS)
            }
            Command::Matrix { file, which } => {
                let (names, profile) = parse_profile_file(&read(&file)?)?;
                let default: Vec<String> = profile.alternatives().map(|x| x.to_string()).collect();
                if names != default {
                    let pairs: Vec<String> =
                        default.iter().zip(&names).map(|(l, n)| format!("{l}={n}")).collect();
                    self.line(&format!("alternatives: {}", pairs.join(" ")))?;
                }
                let rendered = match which {
                    MatrixKind::Rank => profile.rank_matrix().to_string(),
                    MatrixKind::Support => profile.support_matrix().to_string(),
                    MatrixKind::Majority => profile.majority_relation().to_string(),
                    MatrixKind::Margins => profile.margin_matrix().to_string(),
                };
                write!(self.out, "{rendered}").map_err(io_error)?;
                Ok(EXIT_PASS)
            }
            Command::Rules => {
                for r in rules::registry() {
                    self.emit(&RuleRecord {
                        name: r.name(),
                        summary: r.summary(),
                        strict_only: r.requires_strict(),
                    })?;
                }
                Ok(EXIT_PASS)
            }
            Command::Scenarios => {
                for e in proofreplay::library() {
                    let s = (e.build)()?;
                    self.emit(&ScenarioRecord {
                        name: e.name,
                        alias: e.alias,
                        m: s.m(),
                        n: s.n(),
                        profiles: s.profiles.len(),
                        summary: s.summary.as_deref(),
                    })?;
                }
                Ok(EXIT_PASS)
            }
        }
    }

    fn eval(&mut self, rule: &str, file: &Path) -> Result<i32> {
        let rule = rules::lookup(rule)?;
        let (names, profile) = parse_profile_file(&read(file)?)?;
        let set = rule.evaluate(&profile)?;
        self.line(&render_named(set, &names))?;
        Ok(EXIT_PASS)
    }

    fn check(
        &mut self,
        rule: &str,
        axioms: &[String],
        spec: DomainSpec,
        options: CheckOptions,
        timing: bool,
    ) -> Result<i32> {
        let rule = rules::lookup(rule)?;
        let axioms: Vec<Axiom> = axioms.iter().map(|a| a.parse()).collect::<Result<_>>()?;
        let checker = Checker::with_options(rule.clone(), spec, options)?;
        if options.canonical_only && !axioms.iter().all(|&a| voter_symmetric(a)) {
            return Err(Error::Domain("--canonical only applies to voter-symmetric axioms".into()));
        }
        if options.canonical_only {
            let full = Checker::new(rule.clone(), spec)?;
            if !full.check(Axiom::Anonymous).passed() {
                return Err(Error::Domain(format!(
                    "--canonical needs an anonymous rule; `{}` is not",
                    rule.name()
                )));
            }
        }
        self.emit(&Header {
            record: "header",
            tool: "scfcheck",
            version: env!("CARGO_PKG_VERSION"),
            command: &self.echo.clone(),
            spec: spec.into(),
            rule: Some(rule.name()),
        })?;
        let mut code = EXIT_PASS;
        for axiom in axioms {
            let result = checker.check(axiom);
            if !result.passed() {
                code = EXIT_FAIL;
            }
            self.emit(&check_record(&result, timing))?;
        }
        Ok(code)
    }

    fn nominators(&mut self, rule: &str, spec: DomainSpec, jobs: usize) -> Result<i32> {
        let rule: Rule = rules::lookup(rule)?;
        let checker =
            Checker::with_options(rule.clone(), spec, CheckOptions { jobs, canonical_only: false })?;
        let report = checker.nominators();
        self.emit(&Header {
            record: "header",
            tool: "scfcheck",
            version: env!("CARGO_PKG_VERSION"),
            command: &self.echo.clone(),
            spec: spec.into(),
            rule: Some(rule.name()),
        })?;
        self.emit(&NominatorRecord {
            record: "nominators",
            nominators: report.nominators.iter().map(|v| v + 1).collect(),
            eliminated: report
                .eliminated
                .iter()
                .map(|(v, p)| Elimination { voter: v + 1, profile: p.to_string() })
                .collect(),
            profiles_scanned: report.profiles_scanned,
        })?;
        Ok(EXIT_PASS)
    }

    fn verify(
        &mut self,
        scenarios: &[Scenario],
        budget: Option<u64>,
        trace: bool,
        timing: bool,
    ) -> Result<i32> {
        let mut code = EXIT_PASS;
        for s in scenarios {
            let v = proofreplay::verify(s, budget)?;
            if trace {
                for (k, step) in v.propagation.trace.iter().enumerate() {
                    self.emit(&step_record(&v, k, step))?;
                }
            }
            let passed = v.passed();
            self.emit(&verify_record(s, &v, timing))?;
            if !passed && !trace {
                let start = v.propagation.trace.len().saturating_sub(TRACE_TAIL);
                for (k, step) in v.propagation.trace.iter().enumerate().skip(start) {
                    self.emit(&step_record(&v, k, step))?;
                }
            }
            code = code.max(if v.budget_exceeded() {
                EXIT_BUDGET
            } else if passed {
                EXIT_PASS
            } else {
                EXIT_FAIL
            });
        }
        Ok(code)
    }
}

fn voter_symmetric(axiom: Axiom) -> bool {
    !matches!(axiom, Axiom::Anonymous)
}

fn io_error(e: std::io::Error) -> Error {
    Error::Domain(format!("cannot write report: {e}"))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))
}

/// Parses a profile file: one voter per line in `a~b > c` syntax, `#`
/// comments, optional `alternatives:` header fixing the name order.
/// Without the header, names are indexed by first appearance.
pub fn parse_profile_file(src: &str) -> Result<(Vec<String>, Profile)> {
    let mut header: Option<Vec<String>> = None;
    let mut lines = Vec::new();
    for (k, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.trim_start().strip_prefix("alternatives:") {
            if header.is_some() || !lines.is_empty() {
                return Err(Error::Parse {
                    line: k + 1,
                    column: 1,
                    message: "`alternatives:` must come once, before the orders".into(),
                });
            }
            header = Some(rest.split_whitespace().map(str::to_string).collect());
            continue;
        }
        lines.push((k + 1, line));
    }
    if lines.is_empty() {
        return Err(Error::Parse { line: 1, column: 1, message: "no voters".into() });
    }
    let names = match header {
        Some(names) => names,
        None => {
            let mut names: Vec<String> = Vec::new();
            for (_, line) in &lines {
                for tok in
                    line.split(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).filter(|t| !t.is_empty())
                {
                    if !names.iter().any(|n| n == tok) {
                        names.push(tok.to_string());
                    }
                }
            }
            names
        }
    };
    if names.is_empty() || names.len() > MAX_ALTERNATIVES {
        return Err(Error::Domain(format!("{} alternatives; expected 1..={MAX_ALTERNATIVES}", names.len())));
    }
    let profile = Profile::parse_lines(lines.iter().copied(), names.len(), |tok, col| {
        names.iter().position(|n| n == tok).ok_or_else(|| Error::Parse {
            line: 1,
            column: col,
            message: format!("unknown alternative `{tok}`"),
        })
    })?;
    Ok((names, profile))
}

fn render_named(set: ChoiceSet, names: &[String]) -> String {
    let members: Vec<&str> = set.iter().map(|x| names[x.index()].as_str()).collect();
    format!("{{{}}}", members.join(","))
}

#[derive(Serialize)]
struct SpecRecord {
    m: usize,
    n: usize,
    strict: bool,
    exclude_indifferent: bool,
}

impl From<DomainSpec> for SpecRecord {
    fn from(s: DomainSpec) -> Self {
        SpecRecord { m: s.m, n: s.n, strict: s.strict_only, exclude_indifferent: s.exclude_indifferent }
    }
}

#[derive(Serialize)]
struct Header<'a> {
    record: &'static str,
    tool: &'static str,
    version: &'static str,
    command: &'a [String],
    spec: SpecRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    rule: Option<&'a str>,
}

#[derive(Serialize)]
struct RuleRecord<'a> {
    name: &'a str,
    summary: &'a str,
    strict_only: bool,
}

#[derive(Serialize)]
struct ScenarioRecord<'a> {
    name: &'a str,
    alias: Option<&'a str>,
    m: usize,
    n: usize,
    profiles: usize,
    summary: Option<&'a str>,
}

#[derive(Serialize)]
struct CheckRecord {
    record: &'static str,
    axiom: &'static str,
    verdict: &'static str,
    witness: Option<WitnessRecord>,
    profiles_scanned: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<u128>,
}

/// A witness with profiles rendered in the profile syntax (voters joined by
/// `; `) and choice sets in braces.
#[derive(Serialize, Default)]
pub struct WitnessRecord {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub voter: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deviation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deviation_outcome: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alternative: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub other: Option<String>,
}

impl From<&Witness> for WitnessRecord {
    fn from(w: &Witness) -> Self {
        let s = |x: &dyn ToString| Some(x.to_string());
        match w {
            Witness::Manipulation { profile, voter, deviation, truthful, manipulated } => WitnessRecord {
                kind: "manipulation",
                profile: s(profile),
                outcome: s(truthful),
                voter: Some(voter + 1),
                deviation: s(deviation),
                deviation_outcome: s(manipulated),
                ..Default::default()
            },
            Witness::ParetoViolation { profile, outcome, dominated, dominator } => WitnessRecord {
                kind: "pareto-violation",
                profile: s(profile),
                outcome: s(outcome),
                alternative: s(dominated),
                other: s(dominator),
                ..Default::default()
            },
            Witness::SignaturePair { first, second, first_outcome, second_outcome, .. } => WitnessRecord {
                kind: "signature-pair",
                profile: s(first),
                outcome: s(first_outcome),
                deviation: s(second),
                deviation_outcome: s(second_outcome),
                ..Default::default()
            },
            Witness::Imposition { alternative } => {
                WitnessRecord { kind: "imposition", alternative: s(alternative), ..Default::default() }
            }
            Witness::CondorcetWinner { profile, winner, outcome } => WitnessRecord {
                kind: "condorcet-winner",
                profile: s(profile),
                outcome: s(outcome),
                alternative: s(winner),
                ..Default::default()
            },
            Witness::CondorcetLoser { profile, loser, outcome } => WitnessRecord {
                kind: "condorcet-loser",
                profile: s(profile),
                outcome: s(outcome),
                alternative: s(loser),
                ..Default::default()
            },
            Witness::NearUnanimity { profile, alternative, outcome } => WitnessRecord {
                kind: "near-unanimity",
                profile: s(profile),
                outcome: s(outcome),
                alternative: s(alternative),
                ..Default::default()
            },
        }
    }
}

fn check_record(r: &CheckResult, timing: bool) -> CheckRecord {
    CheckRecord {
        record: "check",
        axiom: r.axiom.key(),
        verdict: match r.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        },
        witness: r.witness.as_ref().map(WitnessRecord::from),
        profiles_scanned: r.profiles_scanned,
        elapsed_ms: timing.then_some(r.elapsed.as_millis()),
    }
}

#[derive(Serialize)]
struct NominatorRecord {
    record: &'static str,
    nominators: Vec<usize>,
    eliminated: Vec<Elimination>,
    profiles_scanned: u64,
}

#[derive(Serialize)]
struct Elimination {
    voter: usize,
    profile: String,
}

#[derive(Serialize)]
struct StepRecord {
    record: &'static str,
    step: usize,
    kind: &'static str,
    profile: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    other: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    voter: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alternative: Option<String>,
    removed: String,
    remaining: String,
}

fn step_record(v: &Verification, k: usize, step: &Step) -> StepRecord {
    StepRecord {
        record: "step",
        step: k + 1,
        kind: match step.kind {
            StepKind::Deduce(d) => d.key(),
            StepKind::License => "license",
        },
        profile: v.model.describe(step.profile),
        other: step.other.map(|q| v.model.describe(q)),
        voter: step.voter.map(|i| i + 1),
        alternative: step.alternative.map(|x| x.to_string()),
        removed: step.removed.to_string(),
        remaining: step.remaining.to_string(),
    }
}

#[derive(Serialize)]
struct ExpectationRecord {
    expect: String,
    met: bool,
    observed: String,
}

#[derive(Serialize)]
struct AuditRecord {
    steps: usize,
    removals: usize,
    sound: bool,
    failures: Vec<String>,
}

#[derive(Serialize)]
struct SolveRecord {
    outcome: &'static str,
    nodes: u64,
}

#[derive(Serialize)]
struct LicenseRecord {
    profile: String,
    voter: usize,
}

#[derive(Serialize)]
struct VerifyRecord {
    record: &'static str,
    scenario: String,
    spec: SpecRecord,
    verdict: &'static str,
    profiles: usize,
    variables: usize,
    arcs: usize,
    rounds: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    contradiction: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    license: Option<LicenseRecord>,
    expectations: Vec<ExpectationRecord>,
    audit: AuditRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    solve: Option<SolveRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<u128>,
}

fn verify_record(s: &Scenario, v: &Verification, timing: bool) -> VerifyRecord {
    let p = &v.propagation;
    VerifyRecord {
        record: "verify",
        scenario: s.name.clone(),
        spec: s.spec.into(),
        verdict: if v.budget_exceeded() {
            "budget-exceeded"
        } else if v.passed() {
            "pass"
        } else {
            "fail"
        },
        profiles: v.model.profiles().len(),
        variables: v.model.var_count(),
        arcs: v.model.arc_count(),
        rounds: p.rounds,
        contradiction: v.contradiction_at(),
        license: p.license.map(|(k, i)| LicenseRecord { profile: v.model.describe(k), voter: i + 1 }),
        expectations: v
            .checks
            .iter()
            .map(|c| ExpectationRecord {
                expect: c.expectation.to_string(),
                met: c.met,
                observed: c.observed.clone(),
            })
            .collect(),
        audit: AuditRecord {
            steps: v.audit.steps,
            removals: v.audit.removals,
            sound: v.audit.sound(),
            failures: v.audit.failures.clone(),
        },
        solve: v.solve.as_ref().map(|r| SolveRecord {
            outcome: match r.outcome {
                SolveOutcome::Satisfiable(_) => "sat",
                SolveOutcome::Unsatisfiable => "unsat",
                SolveOutcome::BudgetExceeded => "budget-exceeded",
            },
            nodes: r.nodes,
        }),
        elapsed_ms: timing.then_some(v.elapsed.as_millis()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_files_map_names_by_first_appearance() {
        let (names, p) = parse_profile_file("# two voters\nx > y~z\n\nz > x > y  # trailing\n").unwrap();
        assert_eq!(names, ["x", "y", "z"]);
        assert_eq!(p.to_string(), "a > b~c; c > a > b");
    }

    #[test]
    fn header_pins_the_order() {
        let (names, p) = parse_profile_file("alternatives: c b a\na > b > c\n").unwrap();
        assert_eq!(names, ["c", "b", "a"]);
        assert_eq!(p.to_string(), "c > b > a");
        assert_eq!(render_named(ChoiceSet::from_bits(0b001).unwrap(), &names), "{c}");
    }

    #[test]
    fn parse_errors_report_line_and_column() {
        let e = parse_profile_file("alternatives: a b c\na > b > c\n\n  a > q > c\n").unwrap_err();
        assert_eq!(e, Error::Parse { line: 4, column: 7, message: "unknown alternative `q`".into() });
        assert!(parse_profile_file("# nothing\n").is_err());
    }
}
