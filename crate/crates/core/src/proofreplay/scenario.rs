use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::candidates::{check_m, CandidateSet};
use crate::enumeration::DomainSpec;
use crate::error::{Error, Result};
use crate::prefcore::{resolve_letter, ChoiceSet, Profile, WeakOrder};

/// The deduction rules a scenario may switch on.
///
/// Prunes and links follow directly from the axiom they are named after.
/// Seeds are consequences of an axiom set plus a derived fact; a scenario that
/// enables one asserts those hypotheses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Deduction {
    /// Binary arcs between profiles that differ in one voter.
    Strategyproof,
    /// Drops sets containing a Pareto-dominated alternative.
    Pareto,
    /// Drops sets containing an alternative some other alternative beats
    /// for every voter.
    WeakPareto,
    /// Drops sets containing the Condorcet loser.
    CondorcetLoser,
    /// Equal rank matrices get equal outcomes.
    Rank,
    /// Equal support matrices get equal outcomes.
    Support,
    /// Equal margin matrices get equal outcomes.
    Pairwise,
    /// Equal majority relations get equal outcomes.
    Majority,
    /// Voter permutations get equal outcomes.
    Anonymity,
    /// `{x}` when at least `n - 1` voters rank `x` uniquely first. Sound
    /// for Pareto-optimal strategyproof rules with a non-nominator.
    NearUnanimity,
    /// `{x}` when every voter ranks `x` uniquely first. Sound for
    /// non-imposing strategyproof rules.
    NonImposition,
    /// `{x}` when more than half of the voters rank `x` uniquely first.
    /// Sound for strategyproof non-imposing rules with the Condorcet loser
    /// property and at least three voters.
    AbsoluteMajority,
    /// `{x}` for a Condorcet winner `x`. Sound for strategyproof
    /// non-imposing majority-based rules.
    CondorcetWinner,
}

impl Deduction {
    pub const ALL: [Deduction; 13] = [
        Deduction::Strategyproof,
        Deduction::Pareto,
        Deduction::WeakPareto,
        Deduction::CondorcetLoser,
        Deduction::Rank,
        Deduction::Support,
        Deduction::Pairwise,
        Deduction::Majority,
        Deduction::Anonymity,
        Deduction::NearUnanimity,
        Deduction::NonImposition,
        Deduction::AbsoluteMajority,
        Deduction::CondorcetWinner,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Deduction::Strategyproof => "strategyproof",
            Deduction::Pareto => "pareto",
            Deduction::WeakPareto => "weak-pareto",
            Deduction::CondorcetLoser => "condorcet-loser",
            Deduction::Rank => "rank",
            Deduction::Support => "support",
            Deduction::Pairwise => "pairwise",
            Deduction::Majority => "majority",
            Deduction::Anonymity => "anonymity",
            Deduction::NearUnanimity => "near-unanimity",
            Deduction::NonImposition => "non-imposition",
            Deduction::AbsoluteMajority => "absolute-majority",
            Deduction::CondorcetWinner => "condorcet-winner",
        }
    }

    /// Whether this rule identifies outcomes of profiles with equal
    /// signatures.
    pub fn is_link(self) -> bool {
        matches!(
            self,
            Deduction::Rank
                | Deduction::Support
                | Deduction::Pairwise
                | Deduction::Majority
                | Deduction::Anonymity
        )
    }

    /// Whether this rule forces a singleton outcome.
    pub fn is_seed(self) -> bool {
        matches!(
            self,
            Deduction::NearUnanimity
                | Deduction::NonImposition
                | Deduction::AbsoluteMajority
                | Deduction::CondorcetWinner
        )
    }
}

impl fmt::Display for Deduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Deduction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Deduction::ALL
            .into_iter()
            .find(|d| d.key() == s)
            .ok_or_else(|| Error::unknown("deduction", s, Deduction::ALL.iter().map(|d| d.key())))
    }
}

/// What licenses the near-unanimity seed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum License {
    /// The scenario asserts that some voter is not a nominator.
    #[default]
    Assumed,
    /// The seed stays off until propagation shows some voter is not a
    /// nominator: a profile whose every candidate avoids that voter's top
    /// class.
    NonNominator,
}

impl License {
    pub fn key(self) -> &'static str {
        match self {
            License::Assumed => "assumed",
            License::NonNominator => "non-nominator",
        }
    }
}

impl FromStr for License {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "assumed" => Ok(License::Assumed),
            "non-nominator" => Ok(License::NonNominator),
            _ => Err(Error::unknown("license", s, ["assumed", "non-nominator"])),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    /// Propagate to a fixpoint.
    #[default]
    Propagate,
    /// Propagate, then search for a consistent assignment.
    Solve,
}

impl Mode {
    pub fn key(self) -> &'static str {
        match self {
            Mode::Propagate => "propagate",
            Mode::Solve => "solve",
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "propagate" => Ok(Mode::Propagate),
            "solve" => Ok(Mode::Solve),
            _ => Err(Error::unknown("mode", s, ["propagate", "solve"])),
        }
    }
}

/// An asserted restriction on one profile's outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    pub label: String,
    pub sets: CandidateSet,
}

/// The terminal state a scenario is expected to reach.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expectation {
    Contradiction,
    /// The labelled profile has exactly this one candidate left.
    Forced {
        label: String,
        set: ChoiceSet,
    },
    Unsatisfiable,
    Satisfiable,
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expectation::Contradiction => f.write_str("contradiction"),
            Expectation::Forced { label, set } => write!(f, "{label} = {set}"),
            Expectation::Unsatisfiable => f.write_str("unsat"),
            Expectation::Satisfiable => f.write_str("sat"),
        }
    }
}

/// A finite set of profiles together with the rules allowed to reason
/// about them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub name: String,
    pub summary: Option<String>,
    pub spec: DomainSpec,
    pub axioms: Vec<Deduction>,
    pub license: License,
    pub seeds: Vec<Seed>,
    pub expect: Vec<Expectation>,
    pub mode: Mode,
    /// Profiles with equal signature under this link share one variable.
    pub collapse: Option<Deduction>,
    /// Adds every profile of `spec` to the listed ones.
    pub full_domain: bool,
    /// Node budget for `Mode::Solve`.
    pub budget: Option<u64>,
    pub profiles: Vec<(String, Profile)>,
}

impl Scenario {
    pub fn m(&self) -> usize {
        self.spec.m
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn has(&self, d: Deduction) -> bool {
        self.axioms.contains(&d)
    }

    pub fn profile(&self, label: &str) -> Option<&Profile> {
        self.profiles.iter().find(|(l, _)| l == label).map(|(_, p)| p)
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        check_m(self.m())?;
        let mut seen = HashMap::new();
        for (label, p) in &self.profiles {
            if seen.insert(label.as_str(), ()).is_some() {
                return Err(Error::domain(format!("profile label `{label}` is used twice")));
            }
            if p.m() != self.m() || p.n() != self.n() {
                return Err(Error::domain(format!(
                    "profile `{label}` has m={} n={}, scenario has m={} n={}",
                    p.m(),
                    p.n(),
                    self.m(),
                    self.n()
                )));
            }
            if !self.spec.admits_profile(p) {
                return Err(Error::domain(format!("profile `{label}` is outside the scenario domain")));
            }
        }
        let full = CandidateSet::all(self.m())?;
        for seed in &self.seeds {
            if !seen.contains_key(seed.label.as_str()) {
                return Err(Error::domain(format!("seed names unknown profile `{}`", seed.label)));
            }
            if seed.sets.is_empty() || !seed.sets.is_subset_of(full) {
                return Err(Error::domain(format!(
                    "seed for `{}` must be a non-empty family of non-empty subsets of the alternatives",
                    seed.label
                )));
            }
        }
        for e in &self.expect {
            if let Expectation::Forced { label, set } = e {
                if !seen.contains_key(label.as_str()) {
                    return Err(Error::domain(format!("expectation names unknown profile `{label}`")));
                }
                if !set.fits(self.m()) {
                    return Err(Error::domain(format!("expected set {set} is out of range")));
                }
            }
        }
        if let Some(c) = self.collapse {
            if !c.is_link() || !self.has(c) {
                return Err(Error::domain(format!("collapsing by `{c}` requires `{c}` among the axioms")));
            }
        }
        if self.profiles.is_empty() && !self.full_domain && !self.seeds.is_empty() {
            return Err(Error::domain("seeds need profiles"));
        }
        Ok(())
    }
}

/// Parses one order over letter-named alternatives `a..`.
pub fn parse_order(s: &str, m: usize) -> Result<WeakOrder> {
    WeakOrder::parse_with(s, m, resolve_letter)
}

/// Incremental construction of a scenario from transcribed profiles.
///
/// Voters are 0-based throughout.
#[derive(Clone, Debug)]
pub struct ScenarioBuilder {
    scenario: Scenario,
    index: HashMap<String, usize>,
}

impl ScenarioBuilder {
    pub fn new(name: &str, m: usize, n: usize) -> Self {
        ScenarioBuilder {
            scenario: Scenario {
                name: name.to_string(),
                summary: None,
                spec: DomainSpec::weak(m, n),
                axioms: Vec::new(),
                license: License::Assumed,
                seeds: Vec::new(),
                expect: Vec::new(),
                mode: Mode::Propagate,
                collapse: None,
                full_domain: false,
                budget: None,
                profiles: Vec::new(),
            },
            index: HashMap::new(),
        }
    }

    pub fn summary(&mut self, text: &str) -> &mut Self {
        self.scenario.summary = Some(text.to_string());
        self
    }

    pub fn axioms(&mut self, axioms: &[Deduction]) -> &mut Self {
        self.scenario.axioms.extend_from_slice(axioms);
        self.scenario.axioms.sort();
        self.scenario.axioms.dedup();
        self
    }

    pub fn license(&mut self, license: License) -> &mut Self {
        self.scenario.license = license;
        self
    }

    pub fn mode(&mut self, mode: Mode) -> &mut Self {
        self.scenario.mode = mode;
        self
    }

    pub fn collapse(&mut self, by: Deduction) -> &mut Self {
        self.scenario.collapse = Some(by);
        self
    }

    pub fn full_domain(&mut self) -> &mut Self {
        self.scenario.full_domain = true;
        self
    }

    pub fn budget(&mut self, nodes: u64) -> &mut Self {
        self.scenario.budget = Some(nodes);
        self
    }

    pub fn expect(&mut self, e: Expectation) -> &mut Self {
        self.scenario.expect.push(e);
        self
    }

    pub fn expect_forced(&mut self, label: &str, set: &str) -> Result<&mut Self> {
        let set = set.parse()?;
        Ok(self.expect(Expectation::Forced { label: label.to_string(), set }))
    }

    pub fn seed(&mut self, label: &str, sets: CandidateSet) -> &mut Self {
        self.scenario.seeds.push(Seed { label: label.to_string(), sets });
        self
    }

    pub fn get(&self, label: &str) -> Result<&Profile> {
        self.index
            .get(label)
            .map(|&i| &self.scenario.profiles[i].1)
            .ok_or_else(|| Error::domain(format!("no profile labelled `{label}`")))
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }

    /// Labels in insertion order.
    pub fn labels(&self) -> Vec<String> {
        self.scenario.profiles.iter().map(|(l, _)| l.clone()).collect()
    }

    pub fn add(&mut self, label: &str, profile: Profile) -> Result<&mut Self> {
        if self.index.contains_key(label) {
            return Err(Error::domain(format!("profile label `{label}` is used twice")));
        }
        self.index.insert(label.to_string(), self.scenario.profiles.len());
        self.scenario.profiles.push((label.to_string(), profile));
        Ok(self)
    }

    /// Adds a profile given one order string per voter.
    pub fn profile(&mut self, label: &str, orders: &[&str]) -> Result<&mut Self> {
        let m = self.scenario.m();
        let voters = orders.iter().map(|s| parse_order(s, m)).collect::<Result<Vec<_>>>()?;
        self.add(label, Profile::new(voters)?)
    }

    /// Adds a profile with the same order for every voter except where
    /// `overrides` says otherwise.
    pub fn uniform(&mut self, label: &str, order: &str, overrides: &[(usize, &str)]) -> Result<&mut Self> {
        let m = self.scenario.m();
        let base = parse_order(order, m)?;
        let mut voters = vec![base; self.scenario.n()];
        for &(i, s) in overrides {
            *voters.get_mut(i).ok_or_else(|| Error::domain(format!("voter {i} out of range")))? =
                parse_order(s, m)?;
        }
        self.add(label, Profile::new(voters)?)
    }

    /// Applies `changes` one voter at a time starting from `from`. The
    /// last profile is labelled `label`, the ones before it `label.1`,
    /// `label.2`, and so on. Steps that leave the profile unchanged are
    /// skipped.
    pub fn walk(&mut self, from: &str, changes: &[(usize, &str)], label: &str) -> Result<&mut Self> {
        let m = self.scenario.m();
        let mut current = self.get(from)?.clone();
        let mut pending = Vec::new();
        for &(voter, s) in changes {
            let next = current.with_voter(voter, parse_order(s, m)?)?;
            if next != current {
                pending.push(next.clone());
            }
            current = next;
        }
        if pending.is_empty() {
            return Err(Error::domain(format!("walk from `{from}` changes nothing")));
        }
        let last = pending.len() - 1;
        for (k, p) in pending.into_iter().enumerate() {
            if k == last {
                self.add(label, p)?;
            } else {
                self.add(&format!("{label}.{}", k + 1), p)?;
            }
        }
        Ok(self)
    }

    /// Adds the image of each profile in `labels` under renaming
    /// alternatives by `alternatives` (x becomes `alternatives[x]`) and
    /// reordering voters by `voters` (new voter i is old voter
    /// `voters[i]`). Images are labelled with `suffix` appended; images
    /// whose label already exists are skipped.
    pub fn image(
        &mut self,
        labels: &[String],
        alternatives: &[usize],
        voters: &[usize],
        suffix: &str,
    ) -> Result<&mut Self> {
        for label in labels {
            let target = format!("{label}{suffix}");
            if self.contains(&target) {
                continue;
            }
            let p = self.get(label)?.permute_alternatives(alternatives)?.permute_voters(voters)?;
            self.add(&target, p)?;
        }
        Ok(self)
    }

    pub fn build(&self) -> Result<Scenario> {
        self.scenario.validate()?;
        Ok(self.scenario.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deduction_keys_round_trip() {
        for d in Deduction::ALL {
            assert_eq!(d.key().parse::<Deduction>().unwrap(), d);
        }
        assert!("rank-based".parse::<Deduction>().is_err());
    }

    #[test]
    fn walks_label_intermediates() {
        let mut b = ScenarioBuilder::new("t", 3, 3);
        b.uniform("R1", "a>b>c", &[]).unwrap();
        b.walk("R1", &[(0, "b>a>c"), (1, "a>b>c"), (2, "c>a>b")], "R2").unwrap();
        assert_eq!(b.labels(), ["R1", "R2.1", "R2"]);
        assert_eq!(b.get("R2").unwrap().to_string(), "b > a > c; a > b > c; c > a > b");
    }

    #[test]
    fn images_rename_and_reorder() {
        let mut b = ScenarioBuilder::new("t", 3, 2);
        b.profile("R", &["a>b>c", "c>b>a"]).unwrap();
        b.image(&b.labels(), &[1, 0, 2], &[1, 0], "'").unwrap();
        assert_eq!(b.get("R'").unwrap().to_string(), "c > a > b; b > a > c");
    }

    #[test]
    fn validation() {
        let mut b = ScenarioBuilder::new("t", 3, 2);
        b.profile("R", &["a>b>c", "c>b>a"]).unwrap();
        assert!(b.profile("R", &["a>b>c", "c>b>a"]).is_err());
        b.seed("Q", CandidateSet::only("{a}".parse().unwrap()));
        assert!(b.build().is_err());
        let mut b = ScenarioBuilder::new("t", 3, 2);
        b.collapse(Deduction::Pairwise);
        assert!(b.build().is_err());
        b.axioms(&[Deduction::Pairwise]);
        assert!(b.build().is_ok());
    }
}
