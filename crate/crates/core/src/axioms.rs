//! Exhaustive axiom checks over a finite profile domain.
//!
//! A [`Checker`] tabulates the rule's output on every profile once, indexed
//! by [`ProfileId`], and answers each axiom from that table. Every failing
//! check carries a [`Witness`] that can be re-validated on its own.
//!
//! Scans that look for a violating profile use `find_first` over the id
//! range, so the reported witness is the one with the smallest id whatever
//! the number of worker threads.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::enumeration::{Domain, DomainSpec, ProfileId};
use crate::error::{Error, Result};
use crate::prefcore::{Alternative, ChoiceSet, Profile};
use crate::rules::Rule;

/// Largest domain the outcome table is built for.
const MAX_TABLE: u64 = 1 << 28;

/// Profiles whose signatures are computed in one parallel batch.
const SIGNATURE_BATCH: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    Strategyproof,
    ParetoOptimal,
    Anonymous,
    RankBased,
    SupportBased,
    Pairwise,
    MajorityBased,
    NonImposing,
    CondorcetConsistent,
    CondorcetLoser,
    NearUnanimity,
}

impl Axiom {
    pub const ALL: [Axiom; 11] = [
        Axiom::Strategyproof,
        Axiom::ParetoOptimal,
        Axiom::Anonymous,
        Axiom::RankBased,
        Axiom::SupportBased,
        Axiom::Pairwise,
        Axiom::MajorityBased,
        Axiom::NonImposing,
        Axiom::CondorcetConsistent,
        Axiom::CondorcetLoser,
        Axiom::NearUnanimity,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Axiom::Strategyproof => "strategyproof",
            Axiom::ParetoOptimal => "pareto",
            Axiom::Anonymous => "anonymous",
            Axiom::RankBased => "rank-based",
            Axiom::SupportBased => "support-based",
            Axiom::Pairwise => "pairwise",
            Axiom::MajorityBased => "majority-based",
            Axiom::NonImposing => "non-imposing",
            Axiom::CondorcetConsistent => "condorcet-consistent",
            Axiom::CondorcetLoser => "condorcet-loser",
            Axiom::NearUnanimity => "near-unanimity",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Axiom::ALL
            .into_iter()
            .find(|a| a.key() == s)
            .ok_or_else(|| Error::unknown("axiom", s, Axiom::ALL.iter().map(|a| a.key())))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

/// A concrete counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `voter` obtains `manipulated` instead of `truthful` by reporting its
    /// order in `deviation` when its true order is the one in `profile`.
    Manipulation {
        profile: Profile,
        voter: usize,
        deviation: Profile,
        truthful: ChoiceSet,
        manipulated: ChoiceSet,
    },
    ParetoViolation {
        profile: Profile,
        outcome: ChoiceSet,
        dominated: Alternative,
        dominator: Alternative,
    },
    /// Two profiles the axiom forces to the same outcome, with different
    /// outcomes. For anonymity the second is a voter transposition of the
    /// first.
    SignaturePair {
        axiom: Axiom,
        first: Profile,
        second: Profile,
        first_outcome: ChoiceSet,
        second_outcome: ChoiceSet,
    },
    /// No profile of the domain yields `{alternative}`.
    Imposition {
        alternative: Alternative,
    },
    CondorcetWinner {
        profile: Profile,
        winner: Alternative,
        outcome: ChoiceSet,
    },
    CondorcetLoser {
        profile: Profile,
        loser: Alternative,
        outcome: ChoiceSet,
    },
    NearUnanimity {
        profile: Profile,
        alternative: Alternative,
        outcome: ChoiceSet,
    },
}

impl Witness {
    /// Re-checks the violation from the witness alone, re-evaluating the rule
    /// on the profiles it names. An imposition witness is a claim about the
    /// whole domain, so it is re-checked by scanning `spec`.
    pub fn revalidate(&self, rule: &Rule, spec: &DomainSpec) -> Result<bool> {
        Ok(match self {
            Witness::Manipulation { profile, voter, deviation, truthful, manipulated } => {
                let others_equal = profile.n() == deviation.n()
                    && (0..profile.n()).all(|j| j == *voter || profile.voters()[j] == deviation.voters()[j]);
                let f = rule.evaluate(profile)?;
                let g = rule.evaluate(deviation)?;
                others_equal
                    && f == *truthful
                    && g == *manipulated
                    && profile.voter(*voter)?.kelly_unchecked(g, f)
            }
            Witness::ParetoViolation { profile, outcome, dominated, dominator } => {
                let f = rule.evaluate(profile)?;
                f == *outcome && f.contains(*dominated) && profile.pareto_dominates(*dominator, *dominated)?
            }
            Witness::SignaturePair { axiom, first, second, first_outcome, second_outcome } => {
                let f = rule.evaluate(first)?;
                let g = rule.evaluate(second)?;
                f == *first_outcome && g == *second_outcome && f != g && same_signature(*axiom, first, second)
            }
            Witness::Imposition { alternative } => {
                let domain = Domain::new(*spec)?;
                let target = ChoiceSet::singleton(*alternative);
                let mut imposed = true;
                for (_, p) in domain.profiles() {
                    if rule.evaluate(&p)? == target {
                        imposed = false;
                        break;
                    }
                }
                imposed
            }
            Witness::CondorcetWinner { profile, winner, outcome } => {
                let f = rule.evaluate(profile)?;
                f == *outcome
                    && profile.condorcet_winner() == Some(*winner)
                    && f != ChoiceSet::singleton(*winner)
            }
            Witness::CondorcetLoser { profile, loser, outcome } => {
                let f = rule.evaluate(profile)?;
                f == *outcome && profile.condorcet_loser() == Some(*loser) && f.contains(*loser)
            }
            Witness::NearUnanimity { profile, alternative, outcome } => {
                let f = rule.evaluate(profile)?;
                f == *outcome
                    && profile.unique_top_count(*alternative) + 1 >= profile.n()
                    && f != ChoiceSet::singleton(*alternative)
            }
        })
    }
}

/// Whether two profiles agree on the signature `axiom` is based on.
pub fn same_signature(axiom: Axiom, a: &Profile, b: &Profile) -> bool {
    match axiom {
        Axiom::RankBased => a.rank_matrix() == b.rank_matrix(),
        Axiom::SupportBased => a.support_matrix() == b.support_matrix(),
        Axiom::Pairwise => a.margin_matrix() == b.margin_matrix(),
        Axiom::MajorityBased => a.majority_relation() == b.majority_relation(),
        Axiom::Anonymous => {
            let mut x = a.voters().to_vec();
            let mut y = b.voters().to_vec();
            x.sort();
            y.sort();
            x == y
        }
        _ => false,
    }
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub axiom: Axiom,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub profiles_scanned: u64,
    pub elapsed: Duration,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Voters that are nominators on the whole domain, and for each eliminated
/// voter the first profile where none of its top alternatives is chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NominatorReport {
    pub nominators: Vec<usize>,
    pub eliminated: Vec<(usize, Profile)>,
    pub profiles_scanned: u64,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CheckOptions {
    /// Worker threads; 0 uses the default pool size.
    pub jobs: usize,
    /// Only scan profiles whose voters are sorted by order index. Sound for
    /// anonymous rules and voter-symmetric axioms only.
    pub canonical_only: bool,
}

/// Runs axiom checks for one rule on one domain.
pub struct Checker {
    rule: Rule,
    domain: Domain,
    options: CheckOptions,
    pool: rayon::ThreadPool,
    table: OnceLock<Vec<u16>>,
}

impl Checker {
    pub fn new(rule: Rule, spec: DomainSpec) -> Result<Self> {
        Self::with_options(rule, spec, CheckOptions::default())
    }

    pub fn with_options(rule: Rule, spec: DomainSpec, options: CheckOptions) -> Result<Self> {
        rule.check_spec(&spec)?;
        let domain = Domain::new(spec)?;
        if domain.len() > MAX_TABLE {
            return Err(Error::Capacity(format!(
                "{} profiles exceed the outcome table limit of {MAX_TABLE}",
                domain.len()
            )));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.jobs)
            .build()
            .map_err(|e| Error::domain(format!("cannot start workers: {e}")))?;
        Ok(Checker { rule, domain, options, pool, table: OnceLock::new() })
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Output mask of every profile, indexed by id.
    pub fn outcomes(&self) -> &[u16] {
        self.table.get_or_init(|| {
            self.pool.install(|| {
                (0..self.domain.len() as usize)
                    .into_par_iter()
                    .map(|id| {
                        let p = self.domain.decode_unchecked(ProfileId(id as u64));
                        self.rule.evaluate_unchecked(&p).bits()
                    })
                    .collect()
            })
        })
    }

    fn outcome(&self, id: usize) -> ChoiceSet {
        ChoiceSet::from_bits_unchecked(self.outcomes()[id])
    }

    fn profile(&self, id: usize) -> Profile {
        self.domain.decode_unchecked(ProfileId(id as u64))
    }

    fn scanned(&self, id: usize) -> bool {
        !self.options.canonical_only || self.domain.is_voter_canonical(ProfileId(id as u64))
    }

    pub fn check(&self, axiom: Axiom) -> CheckResult {
        let start = Instant::now();
        self.outcomes();
        let (witness, scanned) = match axiom {
            Axiom::Strategyproof => self.find_manipulation(),
            Axiom::ParetoOptimal => self.find_profile(|id, p, f| {
                f.iter().find_map(|x| {
                    p.alternatives().find(|&y| y != x && p.dominates(y, x)).map(|y| {
                        Witness::ParetoViolation {
                            profile: self.profile(id),
                            outcome: f,
                            dominated: x,
                            dominator: y,
                        }
                    })
                })
            }),
            Axiom::Anonymous => self.find_transposition(),
            Axiom::RankBased => self.find_signature_clash(axiom, |p| p.rank_matrix()),
            Axiom::SupportBased => self.find_signature_clash(axiom, |p| p.support_matrix()),
            Axiom::Pairwise => self.find_signature_clash(axiom, |p| p.margin_matrix()),
            Axiom::MajorityBased => self.find_signature_clash(axiom, |p| p.majority_relation()),
            Axiom::NonImposing => self.find_imposition(),
            Axiom::CondorcetConsistent => self.find_profile(|_, p, f| {
                p.condorcet_winner()
                    .filter(|&w| f != ChoiceSet::singleton(w))
                    .map(|winner| Witness::CondorcetWinner { profile: p.clone(), winner, outcome: f })
            }),
            Axiom::CondorcetLoser => self.find_profile(|_, p, f| {
                p.condorcet_loser().filter(|&l| f.contains(l)).map(|loser| Witness::CondorcetLoser {
                    profile: p.clone(),
                    loser,
                    outcome: f,
                })
            }),
            Axiom::NearUnanimity => {
                let all: Vec<Alternative> = Alternative::all(self.domain.spec().m).collect();
                self.find_near_unanimity(&all)
            }
        };
        finish(axiom, witness, scanned, start)
    }

    /// Near unanimity restricted to the given alternatives being the
    /// near-unanimous one.
    pub fn check_near_unanimity_for(&self, alternatives: &[Alternative]) -> CheckResult {
        let start = Instant::now();
        self.outcomes();
        let (witness, scanned) = self.find_near_unanimity(alternatives);
        finish(Axiom::NearUnanimity, witness, scanned, start)
    }

    /// Smallest-id profile for which `violation` reports a witness.
    fn find_profile<F>(&self, violation: F) -> (Option<Witness>, u64)
    where
        F: Fn(usize, &Profile, ChoiceSet) -> Option<Witness> + Sync,
    {
        let len = self.domain.len() as usize;
        let found = self.pool.install(|| {
            (0..len).into_par_iter().find_map_first(|id| {
                if !self.scanned(id) {
                    return None;
                }
                let p = self.profile(id);
                violation(id, &p, self.outcome(id)).map(|w| (id, w))
            })
        });
        match found {
            Some((id, w)) => (Some(w), id as u64 + 1),
            None => (None, len as u64),
        }
    }

    fn find_manipulation(&self) -> (Option<Witness>, u64) {
        let d = &self.domain;
        let m = d.spec().m;
        let k = d.orders().len();
        let n = d.spec().n;
        let masks = 1usize << m;
        // Best and worst level of every set under every order.
        let mut spans = vec![(0u8, 0u8); k * masks];
        for (oi, order) in d.orders().iter().enumerate() {
            for mask in 1..masks {
                spans[oi * masks + mask] = order.level_span(mask as u16);
            }
        }
        let kelly = |order: usize, x: u16, y: u16| {
            let (xb, xw) = spans[order * masks + x as usize];
            let (yb, yw) = spans[order * masks + y as usize];
            xw <= yb && xb < yw
        };
        let table = self.outcomes();
        let weights: Vec<usize> = (0..n).map(|i| d.weight(i) as usize).collect();
        let len = d.len() as usize;
        let found = self.pool.install(|| {
            (0..len).into_par_iter().find_map_first(|id| {
                if !self.scanned(id) {
                    return None;
                }
                let f = table[id];
                for (i, &w) in weights.iter().enumerate() {
                    let digit = id / w % k;
                    let base = id - digit * w;
                    for other in 0..k {
                        if other != digit && kelly(digit, table[base + other * w], f) {
                            return Some((id, i, base + other * w));
                        }
                    }
                }
                None
            })
        });
        match found {
            Some((id, voter, dev)) => (
                Some(Witness::Manipulation {
                    profile: self.profile(id),
                    voter,
                    deviation: self.profile(dev),
                    truthful: self.outcome(id),
                    manipulated: self.outcome(dev),
                }),
                id as u64 + 1,
            ),
            None => (None, len as u64),
        }
    }

    fn find_transposition(&self) -> (Option<Witness>, u64) {
        let d = &self.domain;
        let k = d.orders().len();
        let n = d.spec().n;
        let table = self.outcomes();
        let len = d.len() as usize;
        let found = self.pool.install(|| {
            (0..len).into_par_iter().find_map_first(|id| {
                for i in 0..n.saturating_sub(1) {
                    let (wi, wj) = (d.weight(i) as usize, d.weight(i + 1) as usize);
                    let (di, dj) = (id / wi % k, id / wj % k);
                    let swapped = id - di * wi - dj * wj + dj * wi + di * wj;
                    if table[swapped] != table[id] {
                        return Some((id, swapped));
                    }
                }
                None
            })
        });
        match found {
            Some((id, other)) => (Some(self.pair(Axiom::Anonymous, id, other)), id as u64 + 1),
            None => (None, len as u64),
        }
    }

    fn pair(&self, axiom: Axiom, first: usize, second: usize) -> Witness {
        Witness::SignaturePair {
            axiom,
            first: self.profile(first),
            second: self.profile(second),
            first_outcome: self.outcome(first),
            second_outcome: self.outcome(second),
        }
    }

    /// Groups profiles by signature, keeping the first id and output per
    /// group; the first profile whose output differs from its group's is the
    /// witness.
    fn find_signature_clash<S, F>(&self, axiom: Axiom, signature: F) -> (Option<Witness>, u64)
    where
        S: Hash + Eq + Send,
        F: Fn(&Profile) -> S + Sync,
    {
        let table = self.outcomes();
        let len = self.domain.len() as usize;
        let mut groups: HashMap<S, usize> = HashMap::new();
        let mut start = 0;
        while start < len {
            let end = (start + SIGNATURE_BATCH).min(len);
            let sigs: Vec<S> = self
                .pool
                .install(|| (start..end).into_par_iter().map(|id| signature(&self.profile(id))).collect());
            for (id, sig) in (start..end).zip(sigs) {
                let first = *groups.entry(sig).or_insert(id);
                if table[first] != table[id] {
                    return (Some(self.pair(axiom, first, id)), id as u64 + 1);
                }
            }
            start = end;
        }
        (None, len as u64)
    }

    fn find_imposition(&self) -> (Option<Witness>, u64) {
        let m = self.domain.spec().m;
        let full = (1u16 << m) - 1;
        let mut covered = 0u16;
        let mut scanned = 0u64;
        for &bits in self.outcomes() {
            scanned += 1;
            if bits.is_power_of_two() {
                covered |= bits;
                if covered == full {
                    return (None, scanned);
                }
            }
        }
        let missing = ChoiceSet::from_bits_unchecked(full & !covered).first();
        (Some(Witness::Imposition { alternative: missing }), scanned)
    }

    /// Visits only the profiles where at least `n - 1` voters uniquely
    /// top-rank one of `alternatives`: choose the alternative, the dissenting
    /// voter and its order, then every combination of the others' orders with
    /// that alternative alone on top.
    fn find_near_unanimity(&self, alternatives: &[Alternative]) -> (Option<Witness>, u64) {
        let d = &self.domain;
        let n = d.spec().n;
        let k = d.orders().len();
        let table = self.outcomes();
        let mut scanned = 0u64;
        for &x in alternatives {
            let target = ChoiceSet::singleton(x).bits();
            let tops: Vec<usize> = (0..k).filter(|&o| d.orders()[o].unique_top() == Some(x)).collect();
            if tops.is_empty() {
                continue;
            }
            for dissenter in 0..n {
                for dis_order in 0..k {
                    let mut counters = vec![0usize; n - 1];
                    loop {
                        let mut id = dis_order * d.weight(dissenter) as usize;
                        for (c, voter) in (0..n).filter(|&v| v != dissenter).enumerate() {
                            id += tops[counters[c]] * d.weight(voter) as usize;
                        }
                        scanned += 1;
                        if table[id] != target {
                            let witness = Witness::NearUnanimity {
                                profile: self.profile(id),
                                alternative: x,
                                outcome: self.outcome(id),
                            };
                            return (Some(witness), scanned);
                        }
                        // Odometer over the n - 1 agreeing voters.
                        let mut pos = counters.len();
                        loop {
                            if pos == 0 {
                                break;
                            }
                            pos -= 1;
                            counters[pos] += 1;
                            if counters[pos] < tops.len() {
                                break;
                            }
                            counters[pos] = 0;
                        }
                        if counters.iter().all(|&c| c == 0) {
                            break;
                        }
                    }
                }
            }
        }
        (None, scanned)
    }

    /// Voters who are nominators on every profile, by elimination.
    pub fn nominators(&self) -> NominatorReport {
        let d = &self.domain;
        let n = d.spec().n;
        let k = d.orders().len();
        let tops: Vec<u16> = d.orders().iter().map(|o| o.top_class().bits()).collect();
        let table = self.outcomes();
        let mut alive: Vec<usize> = (0..n).collect();
        let mut eliminated = Vec::new();
        let mut scanned = 0u64;
        for (id, &f) in table.iter().enumerate() {
            if alive.is_empty() {
                break;
            }
            scanned += 1;
            alive.retain(|&i| {
                let top = tops[id / d.weight(i) as usize % k];
                let keep = top & f != 0;
                if !keep {
                    eliminated.push((i, self.profile(id)));
                }
                keep
            });
        }
        NominatorReport { nominators: alive, eliminated, profiles_scanned: scanned }
    }
}

fn finish(axiom: Axiom, witness: Option<Witness>, scanned: u64, start: Instant) -> CheckResult {
    CheckResult {
        axiom,
        verdict: if witness.is_some() { Verdict::Fail } else { Verdict::Pass },
        witness,
        profiles_scanned: scanned,
        elapsed: start.elapsed(),
    }
}

/// Convenience wrapper: one check with default options.
pub fn check(rule: &Rule, axiom: Axiom, spec: DomainSpec) -> Result<CheckResult> {
    Ok(Checker::new(rule.clone(), spec)?.check(axiom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::lookup;

    fn run(rule: &str, axiom: Axiom, spec: DomainSpec) -> CheckResult {
        let rule = lookup(rule).unwrap();
        let result = check(&rule, axiom, spec).unwrap();
        if let Some(w) = &result.witness {
            assert!(w.revalidate(&rule, &spec).unwrap(), "witness does not revalidate: {w:?}");
        }
        result
    }

    fn verdict(rule: &str, axiom: Axiom, spec: DomainSpec) -> Verdict {
        run(rule, axiom, spec).verdict
    }

    use Verdict::{Fail, Pass};

    #[test]
    fn strategyproofness_small() {
        let w32 = DomainSpec::weak(3, 2);
        assert_eq!(verdict("pareto", Axiom::Strategyproof, w32), Pass);
        assert_eq!(verdict("borda", Axiom::Strategyproof, w32), Fail);
        assert_eq!(verdict("dictator", Axiom::Strategyproof, w32), Pass);
        assert_eq!(verdict("constant-b", Axiom::Strategyproof, w32), Pass);
    }

    #[test]
    fn pareto_optimality() {
        let w32 = DomainSpec::weak(3, 2);
        assert_eq!(verdict("trivial", Axiom::ParetoOptimal, w32), Fail);
        assert_eq!(verdict("pareto", Axiom::ParetoOptimal, w32), Pass);
        assert_eq!(verdict("omninomination", Axiom::ParetoOptimal, w32), Fail);
    }

    #[test]
    fn anonymity() {
        let w32 = DomainSpec::weak(3, 2);
        assert_eq!(verdict("pareto", Axiom::Anonymous, w32), Pass);
        assert_eq!(verdict("constant-a", Axiom::Anonymous, w32), Pass);
        let r = run("dictator", Axiom::Anonymous, w32);
        assert_eq!(r.verdict, Fail);
        match r.witness.unwrap() {
            Witness::SignaturePair { first, second, .. } => {
                assert_eq!(first.permute_voters(&[1, 0]).unwrap(), second)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_imposition() {
        let w32 = DomainSpec::weak(3, 2);
        assert_eq!(verdict("pareto", Axiom::NonImposing, w32), Pass);
        let r = run("trivial", Axiom::NonImposing, w32);
        assert_eq!(r.witness, Some(Witness::Imposition { alternative: Alternative::nth(0) }));
        let r = run("constant-a", Axiom::NonImposing, w32);
        assert_eq!(r.witness, Some(Witness::Imposition { alternative: Alternative::nth(1) }));
    }

    #[test]
    fn condorcet_axioms() {
        let w33 = DomainSpec::weak(3, 3);
        assert_eq!(verdict("copeland", Axiom::CondorcetConsistent, w33), Pass);
        assert_eq!(verdict("borda", Axiom::CondorcetConsistent, w33), Fail);
        assert_eq!(verdict("pareto", Axiom::CondorcetConsistent, w33), Fail);
        assert_eq!(verdict("all-but-condorcet-loser", Axiom::CondorcetLoser, w33), Pass);
        assert_eq!(verdict("pareto", Axiom::CondorcetLoser, w33), Fail);
        assert_eq!(verdict("trivial", Axiom::CondorcetLoser, w33), Fail);
    }

    #[test]
    fn near_unanimity() {
        let w33 = DomainSpec::weak(3, 3);
        assert_eq!(verdict("pareto", Axiom::NearUnanimity, w33), Fail);
        assert_eq!(verdict("constant-a", Axiom::NearUnanimity, w33), Fail);
        assert_eq!(verdict("fstar", Axiom::NearUnanimity, w33), Pass);
        let checker = Checker::new(lookup("lex-pareto").unwrap(), w33).unwrap();
        let only_a = checker.check_near_unanimity_for(&[Alternative::nth(0)]);
        assert_eq!(only_a.verdict, Pass);
        assert!(only_a.profiles_scanned > 0);
        assert_eq!(checker.check(Axiom::NearUnanimity).verdict, Fail);
    }

    #[test]
    fn basedness() {
        let w33 = DomainSpec::weak(3, 3);
        assert_eq!(verdict("pareto", Axiom::RankBased, w33), Pass);
        assert_eq!(verdict("pareto", Axiom::SupportBased, w33), Pass);
        assert_eq!(verdict("pareto", Axiom::Pairwise, w33), Fail);
        assert_eq!(verdict("pareto", Axiom::MajorityBased, w33), Fail);
        assert_eq!(verdict("copeland", Axiom::MajorityBased, w33), Pass);
        assert_eq!(verdict("constant-a", Axiom::Pairwise, w33), Pass);
        assert_eq!(verdict("constant-a", Axiom::MajorityBased, w33), Pass);
    }

    #[test]
    fn nominators_by_elimination() {
        let w33 = DomainSpec::weak(3, 3);
        let pareto = Checker::new(lookup("pareto").unwrap(), w33).unwrap().nominators();
        assert_eq!(pareto.nominators, vec![0, 1, 2]);
        let dictator = Checker::new(lookup("dictator").unwrap(), w33).unwrap().nominators();
        assert_eq!(dictator.nominators, vec![0]);
        let constant = Checker::new(lookup("constant-a").unwrap(), w33).unwrap().nominators();
        assert!(constant.nominators.is_empty());
        assert_eq!(constant.eliminated.len(), 3);
    }

    #[test]
    fn strict_only_rule_rejects_weak_domain() {
        assert!(check(&lookup("two-star-plurality").unwrap(), Axiom::Strategyproof, DomainSpec::weak(3, 3))
            .is_err());
    }

    #[test]
    fn worker_count_does_not_change_witnesses() {
        let spec = DomainSpec::weak(3, 3);
        let rule = lookup("borda").unwrap();
        let one = Checker::with_options(rule.clone(), spec, CheckOptions { jobs: 1, ..Default::default() })
            .unwrap()
            .check(Axiom::Strategyproof);
        let four = Checker::with_options(rule, spec, CheckOptions { jobs: 4, ..Default::default() })
            .unwrap()
            .check(Axiom::Strategyproof);
        assert_eq!(one.witness, four.witness);
        assert_eq!(one.profiles_scanned, four.profiles_scanned);
    }

    #[test]
    fn canonical_scan_agrees_for_anonymous_rules() {
        let spec = DomainSpec::weak(3, 3);
        for rule in ["pareto", "borda"] {
            let full = Checker::new(lookup(rule).unwrap(), spec).unwrap();
            let reduced = Checker::with_options(
                lookup(rule).unwrap(),
                spec,
                CheckOptions { canonical_only: true, ..Default::default() },
            )
            .unwrap();
            for axiom in [Axiom::Strategyproof, Axiom::ParetoOptimal, Axiom::CondorcetLoser] {
                assert_eq!(full.check(axiom).verdict, reduced.check(axiom).verdict, "{rule} {axiom}");
            }
        }
    }

    #[test]
    fn axiom_names_round_trip() {
        for a in Axiom::ALL {
            assert_eq!(a.key().parse::<Axiom>().unwrap(), a);
        }
        assert!("strategy-proof".parse::<Axiom>().is_err());
    }
}
