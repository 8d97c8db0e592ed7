//! Named social choice functions.
//!
//! Every rule is a pure map from a profile to a non-empty [`ChoiceSet`]. A
//! [`Rule`] wraps one with its name and the domain it is defined on; the
//! [`registry`] lists all of them under stable string keys.

use std::fmt;
use std::sync::Arc;

use crate::enumeration::DomainSpec;
use crate::error::{Error, Result};
use crate::prefcore::{Alternative, ChoiceSet, Profile};

type EvalFn = dyn Fn(&Profile) -> ChoiceSet + Send + Sync;

/// A named social choice function together with its domain constraints.
#[derive(Clone)]
pub struct Rule {
    name: String,
    summary: &'static str,
    requires_strict: bool,
    min_m: usize,
    exact_m: Option<usize>,
    eval: Arc<EvalFn>,
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Rule").field("name", &self.name).finish_non_exhaustive()
    }
}

impl Rule {
    /// A rule defined on all weak profiles.
    pub fn new<F>(name: impl Into<String>, summary: &'static str, eval: F) -> Self
    where
        F: Fn(&Profile) -> ChoiceSet + Send + Sync + 'static,
    {
        Rule {
            name: name.into(),
            summary,
            requires_strict: false,
            min_m: 1,
            exact_m: None,
            eval: Arc::new(eval),
        }
    }

    pub fn strict_only(mut self) -> Self {
        self.requires_strict = true;
        self
    }

    pub fn with_min_m(mut self, m: usize) -> Self {
        self.min_m = m;
        self
    }

    pub fn with_exact_m(mut self, m: usize) -> Self {
        self.exact_m = Some(m);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn summary(&self) -> &'static str {
        self.summary
    }

    pub fn requires_strict(&self) -> bool {
        self.requires_strict
    }

    fn check_m(&self, m: usize) -> Result<()> {
        if m < self.min_m {
            return Err(Error::domain(format!("{} needs at least {} alternatives", self.name, self.min_m)));
        }
        match self.exact_m {
            Some(k) if k != m => Err(Error::domain(format!("{} is only defined for m = {k}", self.name))),
            _ => Ok(()),
        }
    }

    /// Fails unless every profile of `spec` is in the rule's domain.
    pub fn check_spec(&self, spec: &DomainSpec) -> Result<()> {
        spec.validate()?;
        self.check_m(spec.m)?;
        if self.requires_strict && !spec.strict_only {
            return Err(Error::domain(format!(
                "{} is only defined on strict orders; use a strict domain",
                self.name
            )));
        }
        Ok(())
    }

    pub fn check_profile(&self, profile: &Profile) -> Result<()> {
        self.check_m(profile.m())?;
        if self.requires_strict && !profile.is_strict() {
            return Err(Error::domain(format!("{} is only defined on strict orders", self.name)));
        }
        Ok(())
    }

    pub fn evaluate(&self, profile: &Profile) -> Result<ChoiceSet> {
        self.check_profile(profile)?;
        Ok((self.eval)(profile))
    }

    /// Evaluates without the domain check. The caller has validated the
    /// domain once, e.g. through [`Rule::check_spec`].
    pub fn evaluate_unchecked(&self, profile: &Profile) -> ChoiceSet {
        (self.eval)(profile)
    }
}

/// All registered rules. Constant rules are listed for alternative `a` only;
/// [`lookup`] accepts `constant-<letter>` for any letter.
pub fn registry() -> Vec<Rule> {
    vec![
        Rule::new("pareto", "all Pareto-optimal alternatives", pareto_rule),
        Rule::new("omninomination", "union of the voters' top classes", omninomination),
        Rule::new("top-pareto", "top-ranked alternatives that are Pareto-optimal", top_pareto),
        Rule::new("borda", "maximal Borda score", borda),
        Rule::new("plurality", "maximal plurality score, one point per top-class member", plurality),
        Rule::new("two-plurality", "plurality score at least the second-highest", two_plurality),
        Rule::new("two-borda", "Borda score at least the second-highest", two_borda),
        Rule::new("two-copeland", "Copeland score at least the second-highest", two_copeland),
        Rule::new(
            "two-star-plurality",
            "positive plurality score at least the second-highest",
            |p: &Profile| two_star_plurality(p).expect("domain checked"),
        )
        .strict_only(),
        Rule::new("copeland", "maximal number of majority wins minus losses", copeland),
        Rule::new("fstar", "maximal elements of the strengthened Pareto dominance", fstar),
        Rule::new("lex-pareto", "first Pareto-optimal alternative by index", lex_pareto),
        Rule::new("trivial", "all alternatives", trivial_rule),
        constant("a").expect("a is valid"),
        Rule::new("dictator", "top class of voter 1", dictator),
        Rule::new(
            "all-but-condorcet-loser",
            "all alternatives except a Condorcet loser",
            all_but_condorcet_loser,
        ),
        Rule::new(
            "pareto-minus-condorcet-loser",
            "Pareto-optimal alternatives except a Condorcet loser",
            pareto_minus_condorcet_loser,
        ),
        Rule::new("majority", "pairwise majority winners, two alternatives only", |p: &Profile| {
            majority_rule_m2(p).expect("domain checked")
        })
        .with_exact_m(2),
    ]
}

fn constant(letter: &str) -> Option<Rule> {
    let mut chars = letter.chars();
    let x = chars.next().and_then(Alternative::from_letter)?;
    if chars.next().is_some() {
        return None;
    }
    Some(
        Rule::new(format!("constant-{x}"), "always the same single alternative", constant_rule(x))
            .with_min_m(x.index() + 1),
    )
}

/// Looks a rule up by key.
pub fn lookup(name: &str) -> Result<Rule> {
    if let Some(rule) = registry().into_iter().find(|r| r.name() == name) {
        return Ok(rule);
    }
    if let Some(rule) = name.strip_prefix("constant-").and_then(constant) {
        return Ok(rule);
    }
    let names: Vec<String> = registry().iter().map(|r| r.name().to_string()).collect();
    Err(Error::unknown("rule", name, names.iter().map(String::as_str)))
}

pub fn pareto_rule(profile: &Profile) -> ChoiceSet {
    profile.pareto_optimal_set()
}

pub fn omninomination(profile: &Profile) -> ChoiceSet {
    profile.top_classes_union()
}

/// Pareto-optimal members of some voter's top class. Never empty: within a
/// voter's top class, a maximal element under Pareto dominance is
/// Pareto-optimal, since anything dominating it is in that top class too.
pub fn top_pareto(profile: &Profile) -> ChoiceSet {
    omninomination(profile)
        .intersection(pareto_rule(profile))
        .expect("some top-ranked alternative is Pareto-optimal")
}

/// Alternatives with the highest score.
pub fn argmax<T: Ord + Copy>(scores: &[T]) -> ChoiceSet {
    let best = *scores.iter().max().expect("at least one alternative");
    select(scores, |s| s == best)
}

fn select<T: Copy>(scores: &[T], keep: impl Fn(T) -> bool) -> ChoiceSet {
    let bits = scores.iter().enumerate().filter(|(_, &s)| keep(s)).fold(0u16, |acc, (x, _)| acc | 1 << x);
    ChoiceSet::from_bits(bits).expect("selection is non-empty")
}

/// `m * n - sum of strict_above` per alternative.
pub fn borda_scores(profile: &Profile) -> Vec<i64> {
    let (m, n) = (profile.m() as i64, profile.n() as i64);
    profile
        .alternatives()
        .map(|x| {
            let above: i64 =
                profile.voters().iter().map(|v| v.rank_tuple_unchecked(x).strict_above as i64).sum();
            m * n - above
        })
        .collect()
}

/// One point per voter whose top class contains the alternative.
pub fn plurality_scores(profile: &Profile) -> Vec<i64> {
    profile
        .alternatives()
        .map(|x| profile.voters().iter().filter(|v| v.level(x) == 0).count() as i64)
        .collect()
}

/// Strict majority wins minus strict majority losses.
pub fn copeland_scores(profile: &Profile) -> Vec<i64> {
    let s = profile.support_matrix();
    profile
        .alternatives()
        .map(|x| profile.alternatives().map(|y| (s.get(x, y) as i64 - s.get(y, x) as i64).signum()).sum())
        .collect()
}

pub fn borda(profile: &Profile) -> ChoiceSet {
    argmax(&borda_scores(profile))
}

pub fn plurality(profile: &Profile) -> ChoiceSet {
    argmax(&plurality_scores(profile))
}

pub fn copeland(profile: &Profile) -> ChoiceSet {
    argmax(&copeland_scores(profile))
}

/// Second element of the score multiset sorted descending, or the only score.
fn second_highest(scores: &[i64]) -> i64 {
    let mut sorted = scores.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted[1.min(sorted.len() - 1)]
}

/// Alternatives whose score is at least the second-highest score, duplicates
/// counted.
pub fn two_threshold(scores: &[i64]) -> ChoiceSet {
    let threshold = second_highest(scores);
    select(scores, |s| s >= threshold)
}

pub fn two_plurality(profile: &Profile) -> ChoiceSet {
    two_threshold(&plurality_scores(profile))
}

pub fn two_borda(profile: &Profile) -> ChoiceSet {
    two_threshold(&borda_scores(profile))
}

pub fn two_copeland(profile: &Profile) -> ChoiceSet {
    two_threshold(&copeland_scores(profile))
}

/// Alternatives with positive plurality score at least the second-highest
/// score. Strict profiles only.
pub fn two_star_plurality(profile: &Profile) -> Result<ChoiceSet> {
    if !profile.is_strict() {
        return Err(Error::domain("two-star-plurality is only defined on strict orders"));
    }
    let scores = plurality_scores(profile);
    let threshold = second_highest(&scores);
    Ok(select(&scores, |s| s >= threshold && s > 0))
}

/// Whether `a` dominates `b` in the relation behind [`fstar`]: `a`
/// Pareto-dominates `b`, or at least `n - 1` voters have `a` in their top
/// class while `s_ab >= 2` and `s_ba <= 1`.
pub fn fstar_dominates(profile: &Profile, a: Alternative, b: Alternative) -> bool {
    if a == b {
        return false;
    }
    if profile.dominates(a, b) {
        return true;
    }
    let tops = profile.voters().iter().filter(|v| v.level(a) == 0).count();
    let s = profile.support_matrix();
    tops + 1 >= profile.n() && s.get(a, b) >= 2 && s.get(b, a) <= 1
}

pub fn fstar(profile: &Profile) -> ChoiceSet {
    let bits = profile
        .alternatives()
        .filter(|&b| !profile.alternatives().any(|a| fstar_dominates(profile, a, b)))
        .fold(0u16, |acc, x| acc | 1 << x.index());
    ChoiceSet::from_bits(bits).expect("the dominance relation is transitive, so maximal elements exist")
}

pub fn lex_pareto(profile: &Profile) -> ChoiceSet {
    ChoiceSet::singleton(pareto_rule(profile).first())
}

pub fn trivial_rule(profile: &Profile) -> ChoiceSet {
    ChoiceSet::full(profile.m()).expect("profile m is valid")
}

pub fn constant_rule(x: Alternative) -> impl Fn(&Profile) -> ChoiceSet + Send + Sync + Clone {
    move |_| ChoiceSet::singleton(x)
}

/// Voter 1's top class.
pub fn dictator(profile: &Profile) -> ChoiceSet {
    profile.voters()[0].top_class()
}

pub fn all_but_condorcet_loser(profile: &Profile) -> ChoiceSet {
    let all = trivial_rule(profile);
    match profile.condorcet_loser() {
        Some(loser) => all.without(loser).unwrap_or(all),
        None => all,
    }
}

/// Pareto set minus the Condorcet loser, and whether the guard that keeps the
/// Pareto set when nothing would remain fired. For m >= 2 it never fires: a
/// unique Pareto-optimal alternative dominates every other one and so beats
/// each of them by majority.
pub fn pareto_minus_condorcet_loser_guarded(profile: &Profile) -> (ChoiceSet, bool) {
    let pareto = pareto_rule(profile);
    match profile.condorcet_loser() {
        Some(loser) => match pareto.without(loser) {
            Some(rest) => (rest, false),
            None => (pareto, true),
        },
        None => (pareto, false),
    }
}

pub fn pareto_minus_condorcet_loser(profile: &Profile) -> ChoiceSet {
    pareto_minus_condorcet_loser_guarded(profile).0
}

/// Majority rule for two alternatives; both on a tie.
pub fn majority_rule_m2(profile: &Profile) -> Result<ChoiceSet> {
    if profile.m() != 2 {
        return Err(Error::domain("the majority rule is only defined for two alternatives"));
    }
    let (a, b) = (Alternative::nth(0), Alternative::nth(1));
    let s = profile.support_matrix();
    Ok(argmax(&[s.get(a, b), s.get(b, a)]))
}
