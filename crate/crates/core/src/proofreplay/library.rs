//! Built-in scenarios. Profiles use letters `a..` and 0-based voters in
//! the builder calls; the `X` blocks of the original constructions are
//! taken to be empty.

use super::candidates::CandidateSet;
use super::scenario::{parse_order, Deduction, Expectation, License, Mode, Scenario, ScenarioBuilder};
use crate::error::{Error, Result};
use crate::prefcore::ChoiceSet;

use Deduction::*;

pub struct Entry {
    pub name: &'static str,
    /// Short key accepted in place of `name`.
    pub alias: Option<&'static str>,
    pub build: fn() -> Result<Scenario>,
}

pub fn library() -> Vec<Entry> {
    vec![
        Entry {
            name: "near-unanimity-walkthrough",
            alias: Some("lemma1-example"),
            build: near_unanimity_walkthrough,
        },
        Entry {
            name: "condorcet-loser-walkthrough",
            alias: Some("lemma3-example"),
            build: condorcet_loser_walkthrough,
        },
        Entry { name: "rank-based-impossibility", alias: Some("thm1"), build: rank_based_impossibility },
        Entry {
            name: "rank-based-impossibility-two-voters",
            alias: Some("thm1-boundaries"),
            build: rank_based_two_voters,
        },
        Entry { name: "support-based-step-n3", alias: Some("thm2-step-n3"), build: support_step_n3 },
        Entry { name: "support-based-step-n4", alias: Some("thm2-step-n4"), build: support_step_n4 },
        Entry { name: "support-based-n4", alias: Some("thm2-n4"), build: support_n4 },
        Entry { name: "condorcet-loser-base", alias: Some("thm4-base"), build: condorcet_loser_base },
        Entry { name: "condorcet-loser-odd", alias: Some("thm4-alt-odd"), build: condorcet_loser_odd },
        Entry { name: "majority-based-impossibility", alias: Some("thmC1"), build: majority_based },
        Entry { name: "pairwise-exhaustive", alias: None, build: pairwise_exhaustive },
    ]
}

/// Looks a scenario up by name or alias.
pub fn scenario(name: &str) -> Result<Scenario> {
    let entries = library();
    match entries.iter().find(|e| e.name == name || e.alias == Some(name)) {
        Some(e) => (e.build)(),
        None => Err(Error::unknown(
            "scenario",
            name,
            entries.iter().flat_map(|e| std::iter::once(e.name).chain(e.alias)),
        )),
    }
}

fn set(s: &str) -> ChoiceSet {
    s.parse().expect("literal choice set")
}

fn only(s: &str) -> CandidateSet {
    CandidateSet::only(set(s))
}

fn near_unanimity_walkthrough() -> Result<Scenario> {
    let mut b = ScenarioBuilder::new("near-unanimity-walkthrough", 4, 3);
    b.summary("a non-nominating voter lets the others force a unique winner")
        .axioms(&[Strategyproof, Pareto]);
    b.profile("R0", &["b>a~d>c", "d>a>b~c", "a~c>b~d"])?;
    b.seed("R0", only("{a,d}"));
    b.walk("R0", &[(1, "a~d>b~c"), (2, "a~d>b~c")], "R1")?;
    b.walk("R1", &[(0, "b>a>d>c")], "R2")?;
    b.walk("R2", &[(1, "a>b>c~d"), (2, "a>b>c~d")], "R3")?;
    b.walk("R3", &[(0, "b>d>c>a")], "R4")?;
    b.walk("R4", &[(0, "c>b>d>a")], "R5")?;
    b.walk("R5", &[(1, "a~b>c~d"), (2, "a~b>c~d")], "R6")?;
    b.walk("R6", &[(1, "b>c>a~d"), (2, "b>c>a~d")], "R7")?;
    for r in ["R2", "R3", "R4", "R5"] {
        b.expect_forced(r, "{a}")?;
    }
    b.expect_forced("R6", "{b}")?.expect_forced("R7", "{b}")?;
    b.build()
}

fn condorcet_loser_walkthrough() -> Result<Scenario> {
    let mut b = ScenarioBuilder::new("condorcet-loser-walkthrough", 4, 4);
    b.summary("a voter turns the unique winner from best to worst").axioms(&[
        Strategyproof,
        CondorcetLoser,
        NonImposition,
    ]);
    let three = |s: &'static str| [(0, s), (1, s), (2, s)];
    b.uniform("R1", "a>b>c>d", &[])?;
    b.walk("R1", &three("a>c>d>b"), "R2")?;
    b.walk("R2", &[(3, "b>a>c>d")], "R3")?;
    b.walk("R3", &three("a>d>b>c"), "R4")?;
    b.walk("R4", &[(3, "c>a~b>d")], "R5")?;
    b.walk("R5", &three("a>b>c>d"), "R6")?;
    // Voter 4 ranking b first instead of c: the same steps with b and c
    // renamed.
    let base = b.labels();
    b.image(&base, &[0, 2, 1, 3], &[0, 1, 2, 3], "'bc")?;
    b.walk("R6'bc", &three("a>b>c>d"), "R7")?;
    b.walk("R6", &[(3, "d>a~b~c")], "R8")?;
    let chain = b.labels();
    b.image(&chain, &[0, 3, 2, 1], &[0, 1, 2, 3], "'bd")?;
    b.walk("R8'bd", &three("a>c>b>d"), "R9")?;
    b.image(&chain, &[0, 1, 3, 2], &[0, 1, 2, 3], "'cd")?;
    b.walk("R8'cd", &three("a>c>b>d"), "R10")?;
    b.walk("R8", &three("a>c>b>d"), "R11")?;
    b.walk("R11", &[(3, "b>c>d>a")], "R12")?;
    for r in ["R3", "R5", "R8", "R9", "R10", "R11", "R12"] {
        b.expect_forced(r, "{a}")?;
    }
    b.build()
}

fn rank_based_impossibility() -> Result<Scenario> {
    let mut b = ScenarioBuilder::new("rank-based-impossibility", 4, 3);
    b.summary("no rank-based, Pareto-optimal and strategyproof rule for m=4, n=3")
        .axioms(&[Strategyproof, Pareto, Rank, NearUnanimity])
        .license(License::NonNominator);
    // Equal rank matrices, different Pareto sets: voter 2 is no nominator.
    b.profile("R1", &["a~b>c~d", "c~d>a~b", "a>b~c~d"])?;
    b.profile("R2", &["a~c>b~d", "b~d>a~c", "a>b~c~d"])?;
    b.profile("R3", &["a~d>b~c", "b~c>a~d", "a>b~c~d"])?;
    // Voters 2..k rank {a,b} first, voter 1 ranks a last.
    let n = 3;
    for k in 1..=n {
        let mut first = vec!["c~d>b>a"];
        let mut second = vec!["b~d>c>a"];
        for i in 1..n {
            let o = if i < k { "a~b>c>d" } else { "a>b>c>d" };
            first.push(o);
            second.push(o);
        }
        b.profile(&format!("R{k}_1"), &first)?;
        b.profile(&format!("R{k}_2"), &second)?;
        if k < n {
            b.walk(&format!("R{k}_2"), &[(k, "a~c>b>d")], &format!("R{k}_3"))?;
        }
    }
    b.expect(Expectation::Contradiction);
    b.build()
}

fn rank_based_two_voters() -> Result<Scenario> {
    let mut b = ScenarioBuilder::new("rank-based-impossibility-two-voters", 5, 2);
    b.summary("no rank-based, Pareto-optimal and strategyproof rule for m=5, n=2")
        .axioms(&[Strategyproof, Pareto, Rank, NearUnanimity])
        .license(License::NonNominator);
    b.profile("R1", &["a~b>e>c~d", "c~d>a>b~e"])?;
    b.profile("R2", &["a~c>e>b~d", "b~d>a>c~e"])?;
    b.profile("R3", &["a~d>e>b~c", "b~c>a>d~e"])?;
    // With two voters each one alone is near-unanimous.
    b.profile("R4", &["a>b>c>d>e", "b>a>c>d>e"])?;
    b.expect(Expectation::Contradiction);
    b.build()
}

/// The support-based step for k = 1 up to the profile where b is forced.
fn support_step(b: &mut ScenarioBuilder, n: usize) -> Result<()> {
    b.axioms(&[Strategyproof, Pareto, Support, NearUnanimity]);
    let mut first = vec!["a>c>b", "c>b>a"];
    first.resize(n, "a>b>c");
    b.profile("R1_1", &first)?;
    // Voters 3..n swap a and b one at a time: tie them, trade the tie with
    // voter 2 through equal supports, and let voter 2 return.
    let mut from = "R1_1".to_string();
    for v in 2..n {
        let tag = if v == 2 { String::new() } else { format!("v{}", v + 1) };
        let tied = format!("R1_2{tag}");
        b.walk(&from, &[(v, "a~b>c")], &tied)?;
        let swapped = b.get(&tied)?.clone();
        let swapped =
            swapped.with_voter(1, parse_order("c>a~b", 3)?)?.with_voter(v, parse_order("b>a>c", 3)?)?;
        let traded = format!("R1_3{tag}");
        b.add(&traded, swapped)?;
        let back = if v + 1 == n { "R1_5".to_string() } else { format!("R1_4{tag}") };
        b.walk(&traded, &[(1, "c>b>a")], &back)?;
        from = back;
    }
    b.walk("R1_5", &[(1, "b>a>c")], "R1_6")?;
    b.walk("R1_5", &[(0, "c>a>b")], "R1_7")?;
    Ok(())
}

fn support_step_n3() -> Result<Scenario> {
    let mut b = ScenarioBuilder::new("support-based-step-n3", 3, 3);
    b.summary("support-based nominator step, unrolled for three voters");
    support_step(&mut b, 3)?;
    b.expect(Expectation::Contradiction);
    b.build()
}

fn support_step_n4_builder(name: &str) -> Result<ScenarioBuilder> {
    let mut b = ScenarioBuilder::new(name, 3, 4);
    support_step(&mut b, 4)?;
    b.walk("R1_7", &[(2, "b>c>a"), (3, "b>c>a")], "R1_8")?;
    b.walk("R1_8", &[(1, "c>a>b")], "R1_9")?;
    Ok(b)
}

fn support_step_n4() -> Result<Scenario> {
    let mut b = support_step_n4_builder("support-based-step-n4")?;
    b.summary("support-based nominator step, unrolled for four voters");
    b.expect_forced("R1_5", "{b}")?.expect_forced("R1_9", "{b}")?;
    b.build()
}

fn support_n4() -> Result<Scenario> {
    let mut b = support_step_n4_builder("support-based-n4")?;
    b.summary("two voters decide alone, and the mirrored argument clashes");
    b.walk("R1_9", &[(0, "a>b>c"), (1, "a>b>c"), (2, "b>a>c"), (3, "b>a>c")], "Q")?;
    // Renaming a and b and swapping the voter pairs maps Q onto itself.
    let all = b.labels();
    b.image(&all, &[1, 0, 2], &[2, 3, 0, 1], "'")?;
    b.expect(Expectation::Contradiction);
    b.build()
}

fn condorcet_loser_base() -> Result<Scenario> {
    let mut b = ScenarioBuilder::new("condorcet-loser-base", 3, 4);
    b.summary("no strategyproof non-imposing rule with the Condorcet loser property for n=4").axioms(&[
        Strategyproof,
        CondorcetLoser,
        AbsoluteMajority,
    ]);
    b.profile("R1", &["a>c>b", "a>b>c", "a>b>c", "b>c>a"])?;
    b.walk("R1", &[(0, "a~c>b")], "R2")?;
    b.walk("R2", &[(1, "a>c>b"), (3, "c>a~b")], "R3")?;
    b.walk("R3", &[(2, "b>a>c")], "R4")?;
    b.walk("R4", &[(3, "c>b>a")], "R5")?;
    // The same steps for renamed alternatives and voters.
    let base = b.labels();
    b.image(&base, &[2, 0, 1], &[0, 2, 3, 1], "'s")?;
    let all = b.labels();
    b.image(&all, &[1, 0, 2], &[2, 3, 0, 1], "'t")?;
    b.walk("R5", &[(0, "a>b>c"), (1, "a>b>c"), (3, "b>a>c")], "R9")?;
    b.walk("R5't", &[(2, "b>a>c"), (3, "b>a>c"), (1, "a>b>c")], "R9'")?;
    b.expect(Expectation::Contradiction);
    b.build()
}

fn condorcet_loser_odd() -> Result<Scenario> {
    let mut b = ScenarioBuilder::new("condorcet-loser-odd", 3, 5);
    b.summary("the Condorcet loser impossibility for five voters without indifferent voters").axioms(&[
        Strategyproof,
        CondorcetLoser,
        AbsoluteMajority,
    ]);
    b.profile("R1", &["a>b>c", "a>c>b", "a>c>b", "b>a~c", "b>a~c"])?;
    b.walk("R1", &[(2, "c>a>b")], "R2")?;
    b.walk("R2", &[(3, "b>c>a"), (4, "b>c>a")], "R3")?;
    b.walk("R3", &[(0, "b>a>c")], "R3b")?;
    b.profile("R4", &["a>c>b", "a>c>b", "c>a>b", "c>b>a", "c>b>a"])?;
    b.walk("R4", &[(3, "b>c>a"), (4, "b>c>a")], "R5")?;
    b.expect(Expectation::Contradiction);
    b.build()
}

fn majority_based() -> Result<Scenario> {
    let mut b = ScenarioBuilder::new("majority-based-impossibility", 3, 3);
    b.summary("no majority-based non-imposing strategyproof rule for m=3, n=3").axioms(&[
        Strategyproof,
        Majority,
        CondorcetWinner,
    ]);
    b.profile("R1", &["c>b>a", "a>b>c", "a>c>b"])?;
    b.walk("R1", &[(1, "a~b>c")], "R2")?;
    b.profile("R3", &["c>a~b", "b>a>c", "a>c>b"])?;
    b.walk("R3", &[(0, "c>b>a")], "R4")?;
    b.walk("R4", &[(0, "b>c>a")], "R6")?;
    b.walk("R4", &[(2, "c>b>a"), (1, "b>c>a")], "R7")?;
    b.expect(Expectation::Contradiction);
    b.build()
}

fn pairwise_exhaustive() -> Result<Scenario> {
    let mut b = ScenarioBuilder::new("pairwise-exhaustive", 3, 3);
    b.summary("no pairwise, Pareto-optimal and strategyproof rule for m=3, n=3")
        .axioms(&[Strategyproof, Pareto, Pairwise])
        .collapse(Pairwise)
        .full_domain()
        .mode(Mode::Solve)
        .budget(5_000_000)
        .expect(Expectation::Unsatisfiable);
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_builds_and_resolves() {
        for e in library() {
            let s = (e.build)().unwrap();
            assert_eq!(s.name, e.name);
            assert_eq!(scenario(e.name).unwrap(), s);
            if let Some(alias) = e.alias {
                assert_eq!(scenario(alias).unwrap(), s);
            }
        }
        assert!(matches!(scenario("no-such-scenario"), Err(Error::Unknown { .. })));
    }
}
