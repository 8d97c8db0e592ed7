//! Proof replay: deduction over partial knowledge of an unknown rule.
//!
//! A [`Scenario`] lists profiles and the rules allowed to reason about them.
//! [`Model::compile`] turns it into one variable per profile (or per
//! signature class), each holding the choice sets still admissible.
//! Propagation applies prunes, seeds, signature links and strategyproofness
//! arcs until nothing changes, recording every removal; [`Model::audit`]
//! replays the record against the axiom definitions. A variable left
//! without candidates is a contradiction.

mod candidates;
mod engine;
mod library;
mod scenario;
pub mod text;

use std::time::{Duration, Instant};

pub use candidates::{CandidateMap, CandidateSet, MAX_REPLAY_ALTERNATIVES};
pub use engine::{Audit, Model, Propagation, SolveOutcome, SolveReport, Step, StepKind, MAX_MODEL_PROFILES};
pub use library::{library, scenario, Entry};
pub use scenario::{parse_order, Deduction, Expectation, License, Mode, Scenario, ScenarioBuilder, Seed};

use crate::error::Result;

/// Search budget when neither the caller nor the scenario sets one.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug)]
pub struct ExpectationCheck {
    pub expectation: Expectation,
    pub met: bool,
    /// What was observed, e.g. the remaining candidates.
    pub observed: String,
}

#[derive(Clone, Debug)]
pub struct Verification {
    pub model: Model,
    pub propagation: Propagation,
    pub audit: Audit,
    pub solve: Option<SolveReport>,
    pub checks: Vec<ExpectationCheck>,
    pub elapsed: Duration,
}

impl Verification {
    /// Every expectation met, the trace audited sound and the search, if
    /// any, finished within budget.
    pub fn passed(&self) -> bool {
        self.audit.sound()
            && self.checks.iter().all(|c| c.met)
            && !matches!(self.solve, Some(SolveReport { outcome: SolveOutcome::BudgetExceeded, .. }))
    }

    pub fn budget_exceeded(&self) -> bool {
        matches!(self.solve, Some(SolveReport { outcome: SolveOutcome::BudgetExceeded, .. }))
    }

    /// The first profile of the variable propagation emptied.
    pub fn contradiction_at(&self) -> Option<String> {
        self.propagation.contradiction.map(|var| first_of(&self.model, var))
    }
}

fn first_of(model: &Model, var: usize) -> String {
    (0..model.profiles().len())
        .find(|&k| model.var_of(k) == var)
        .map(|k| model.describe(k))
        .unwrap_or_else(|| format!("variable {var}"))
}

/// Propagates, audits, searches when the scenario asks for it and compares
/// the outcome with the scenario's expectations.
pub fn verify(s: &Scenario, budget: Option<u64>) -> Result<Verification> {
    let start = Instant::now();
    let model = Model::compile(s)?;
    let propagation = model.propagate();
    let audit = model.audit(&propagation);
    let solve = (s.mode == Mode::Solve).then(|| model.solve(budget.or(s.budget).unwrap_or(DEFAULT_BUDGET)));
    let checks = s.expect.iter().map(|e| check(&model, &propagation, solve.as_ref(), e)).collect();
    Ok(Verification { model, propagation, audit, solve, checks, elapsed: start.elapsed() })
}

fn check(model: &Model, p: &Propagation, solve: Option<&SolveReport>, e: &Expectation) -> ExpectationCheck {
    let (met, observed) = match e {
        Expectation::Contradiction => match p.contradiction {
            Some(var) => (true, format!("no candidates left at {}", first_of(model, var))),
            None => (false, "propagation reached a consistent fixpoint".to_string()),
        },
        Expectation::Forced { label, set } => {
            let left = model.candidates(&p.map, label).unwrap_or(CandidateSet::EMPTY);
            (p.contradiction.is_none() && left == CandidateSet::only(*set), left.to_string())
        }
        Expectation::Unsatisfiable | Expectation::Satisfiable => match solve.map(|r| &r.outcome) {
            Some(SolveOutcome::Unsatisfiable) => {
                (*e == Expectation::Unsatisfiable, "unsatisfiable".to_string())
            }
            Some(SolveOutcome::Satisfiable(_)) => (*e == Expectation::Satisfiable, "satisfiable".to_string()),
            Some(SolveOutcome::BudgetExceeded) => (false, "budget exceeded".to_string()),
            None => (false, "scenario does not search".to_string()),
        },
    };
    ExpectationCheck { expectation: e.clone(), met, observed }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(name: &str) -> Verification {
        let v = verify(&scenario(name).unwrap(), None).unwrap();
        for c in &v.checks {
            assert!(c.met, "{name}: {} observed {}", c.expectation, c.observed);
        }
        assert!(v.audit.sound(), "{name}: {:?}", v.audit.failures);
        v
    }

    #[test]
    fn walkthroughs() {
        run("near-unanimity-walkthrough");
        run("condorcet-loser-walkthrough");
    }

    #[test]
    fn rank_based() {
        let v = run("rank-based-impossibility");
        assert!(v.propagation.license.is_some());
        run("rank-based-impossibility-two-voters");
    }

    #[test]
    fn support_based() {
        run("support-based-step-n3");
        run("support-based-step-n4");
        run("support-based-n4");
    }

    #[test]
    fn condorcet_loser() {
        run("condorcet-loser-base");
        run("condorcet-loser-odd");
    }

    #[test]
    fn majority_based() {
        run("majority-based-impossibility");
    }

    #[test]
    fn trace_is_reproducible() {
        let s = scenario("rank-based-impossibility").unwrap();
        let a = verify(&s, None).unwrap();
        let b = verify(&s, None).unwrap();
        assert_eq!(a.propagation, b.propagation);
    }

    #[test]
    fn pairwise_exhaustive_is_unsatisfiable() {
        let v = verify(&scenario("pairwise-exhaustive").unwrap(), None).unwrap();
        let report = v.solve.as_ref().unwrap();
        assert_eq!(report.outcome, SolveOutcome::Unsatisfiable, "nodes {}", report.nodes);
        assert!(v.passed());
    }
}
