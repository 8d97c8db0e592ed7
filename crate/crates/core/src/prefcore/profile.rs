use std::fmt;
use std::str::FromStr;

use super::order::{check_permutation, resolve_letter};
use super::{Alternative, ChoiceSet, MajorityRelation, MarginMatrix, RankMatrix, SupportMatrix, WeakOrder};
use crate::error::{Error, Result};

/// An ordered tuple of voters' weak orders over the same alternatives.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Profile {
    voters: Vec<WeakOrder>,
}

impl Profile {
    pub fn new(voters: Vec<WeakOrder>) -> Result<Self> {
        let first = voters.first().ok_or_else(|| Error::domain("a profile needs at least one voter"))?;
        if let Some(bad) = voters.iter().position(|v| v.m() != first.m()) {
            return Err(Error::domain(format!(
                "voter {} ranks {} alternatives, voter 1 ranks {}",
                bad + 1,
                voters[bad].m(),
                first.m()
            )));
        }
        Ok(Profile { voters })
    }

    pub fn m(&self) -> usize {
        self.voters[0].m()
    }

    pub fn n(&self) -> usize {
        self.voters.len()
    }

    pub fn voters(&self) -> &[WeakOrder] {
        &self.voters
    }

    pub fn voter(&self, i: usize) -> Result<&WeakOrder> {
        self.voters
            .get(i)
            .ok_or_else(|| Error::domain(format!("voter {i} out of range for n = {}", self.n())))
    }

    /// The same profile with voter `i` reporting `order` instead.
    pub fn with_voter(&self, i: usize, order: WeakOrder) -> Result<Profile> {
        self.voter(i)?;
        if order.m() != self.m() {
            return Err(Error::domain("replacement order ranks a different number of alternatives"));
        }
        let mut voters = self.voters.clone();
        voters[i] = order;
        Ok(Profile { voters })
    }

    pub fn alternatives(&self) -> impl Iterator<Item = Alternative> + Clone {
        Alternative::all(self.m())
    }

    pub fn is_strict(&self) -> bool {
        self.voters.iter().all(WeakOrder::is_strict)
    }

    pub fn has_fully_indifferent_voter(&self) -> bool {
        self.voters.iter().any(WeakOrder::is_fully_indifferent)
    }

    /// Voter `i` of the result holds the order of voter `perm[i]`.
    pub fn permute_voters(&self, perm: &[usize]) -> Result<Profile> {
        check_permutation(perm, self.n(), "voter")?;
        Ok(Profile { voters: perm.iter().map(|&p| self.voters[p]).collect() })
    }

    /// Relabels alternatives in every order: `x` becomes `perm[x]`.
    pub fn permute_alternatives(&self, perm: &[usize]) -> Result<Profile> {
        Ok(Profile { voters: self.voters.iter().map(|v| v.permute(perm)).collect::<Result<_>>()? })
    }

    pub fn rank_matrix(&self) -> RankMatrix {
        RankMatrix::of(self)
    }

    pub fn support_matrix(&self) -> SupportMatrix {
        SupportMatrix::of(self)
    }

    pub fn margin_matrix(&self) -> MarginMatrix {
        self.support_matrix().margins()
    }

    pub fn majority_relation(&self) -> MajorityRelation {
        self.support_matrix().majority()
    }

    /// Whether `x` Pareto-dominates `y`: every voter weakly prefers `x`, and
    /// some voter strictly.
    pub fn pareto_dominates(&self, x: Alternative, y: Alternative) -> Result<bool> {
        x.check(self.m())?;
        y.check(self.m())?;
        if x == y {
            return Err(Error::domain("Pareto dominance compares two distinct alternatives"));
        }
        Ok(self.dominates(x, y))
    }

    pub(crate) fn dominates(&self, x: Alternative, y: Alternative) -> bool {
        let mut strict = false;
        for v in &self.voters {
            let (lx, ly) = (v.level(x), v.level(y));
            if lx > ly {
                return false;
            }
            strict |= lx < ly;
        }
        strict
    }

    /// Alternatives that no alternative Pareto-dominates.
    pub fn pareto_optimal_set(&self) -> ChoiceSet {
        self.undominated(|y, x| self.dominates(y, x))
    }

    /// Alternatives `x` for which no `y` is strictly preferred to `x` by
    /// every voter.
    pub fn weak_pareto_optimal_set(&self) -> ChoiceSet {
        self.undominated(|y, x| self.voters.iter().all(|v| v.prefers(y, x)))
    }

    fn undominated(&self, beats: impl Fn(Alternative, Alternative) -> bool) -> ChoiceSet {
        let bits = self
            .alternatives()
            .filter(|&x| !self.alternatives().any(|y| y != x && beats(y, x)))
            .fold(0u16, |acc, x| acc | 1 << x.index());
        ChoiceSet::from_bits(bits).expect("a finite strict partial order has maximal elements")
    }

    /// The alternative beating every other one in strict majority
    /// comparisons.
    pub fn condorcet_winner(&self) -> Option<Alternative> {
        let s = self.support_matrix();
        self.alternatives().find(|&x| self.alternatives().all(|y| y == x || s.get(x, y) > s.get(y, x)))
    }

    /// The alternative losing every strict majority comparison.
    pub fn condorcet_loser(&self) -> Option<Alternative> {
        let s = self.support_matrix();
        self.alternatives().find(|&x| self.alternatives().all(|y| y == x || s.get(y, x) > s.get(x, y)))
    }

    /// Number of voters whose top class is exactly `{x}`.
    pub fn unique_top_count(&self, x: Alternative) -> usize {
        self.voters.iter().filter(|v| v.unique_top() == Some(x)).count()
    }

    /// Alternatives uniquely top-ranked by at least `n - 1` voters. With two
    /// voters this may name two alternatives.
    pub fn near_unanimous_alternatives(&self) -> Vec<Alternative> {
        let need = self.n().saturating_sub(1).max(1);
        self.alternatives().filter(|&x| self.unique_top_count(x) >= need).collect()
    }

    /// The alternative uniquely top-ranked by more than half of the voters.
    pub fn absolute_majority_top(&self) -> Option<Alternative> {
        self.alternatives().find(|&x| 2 * self.unique_top_count(x) > self.n())
    }

    /// Union of all voters' top classes.
    pub fn top_classes_union(&self) -> ChoiceSet {
        self.voters.iter().map(WeakOrder::top_class).reduce(ChoiceSet::union).expect("at least one voter")
    }

    /// Parses orders with alternatives named by index through `resolve`; one
    /// order per item of `lines`.
    pub fn parse_lines<'a, I, F>(lines: I, m: usize, mut resolve: F) -> Result<Profile>
    where
        I: IntoIterator<Item = (usize, &'a str)>,
        F: FnMut(&str, usize) -> Result<usize>,
    {
        let mut voters = Vec::new();
        for (line, text) in lines {
            let order = WeakOrder::parse_with(text, m, &mut resolve).map_err(|e| match e {
                Error::Parse { column, message, .. } => Error::parse(line, column, message),
                other => other,
            })?;
            voters.push(order);
        }
        Profile::new(voters)
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.voters.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Letter-named orders separated by `;` or newlines. The number of
/// alternatives is taken from the highest letter used anywhere.
impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let m = s
            .chars()
            .filter_map(Alternative::from_letter)
            .map(|x| x.index() + 1)
            .max()
            .ok_or_else(|| Error::parse(1, 1, "no alternatives"))?;
        let items: Vec<(usize, &str)> = s
            .split([';', '\n'])
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .enumerate()
            .map(|(i, t)| (i + 1, t))
            .collect();
        Profile::parse_lines(items, m, resolve_letter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Profile {
        s.parse().unwrap()
    }

    fn x(c: char) -> Alternative {
        Alternative::from_letter(c).unwrap()
    }

    #[test]
    fn construction_checks_shape() {
        let a: WeakOrder = "a > b".parse().unwrap();
        let b: WeakOrder = "a > b > c".parse().unwrap();
        assert!(Profile::new(vec![]).is_err());
        assert!(Profile::new(vec![a, b]).is_err());
        let prof = p("a > b > c; c > b > a");
        assert_eq!((prof.m(), prof.n()), (3, 2));
        assert_eq!(prof.to_string().parse::<Profile>().unwrap(), prof);
    }

    #[test]
    fn pareto_sets() {
        assert_eq!(p("a>b>c; a>b>c; a>b>c").pareto_optimal_set().to_string(), "{a}");
        assert_eq!(p("a>b>c; c>b>a").pareto_optimal_set().to_string(), "{a,b,c}");
        assert_eq!(p("a~b~c; a~b~c").pareto_optimal_set().to_string(), "{a,b,c}");
        assert!(p("a~b~c; a~b~c").pareto_dominates(x('a'), x('b')) == Ok(false));
        assert!(p("a>b>c").pareto_dominates(x('a'), x('a')).is_err());
    }

    #[test]
    fn weak_pareto_sets() {
        assert_eq!(p("a>b>c; a>b>c").weak_pareto_optimal_set().to_string(), "{a}");
        assert_eq!(p("a > b~c; a~b > c").weak_pareto_optimal_set().to_string(), "{a,b}");
        assert_eq!(p("a>b>c; a~b~c").weak_pareto_optimal_set().to_string(), "{a,b,c}");
    }

    #[test]
    fn condorcet_winner_and_loser() {
        let unanimous = p("a>b>c; a>b>c; a>b>c");
        assert_eq!(unanimous.condorcet_winner(), Some(x('a')));
        assert_eq!(unanimous.condorcet_loser(), Some(x('c')));
        let cycle = p("a>b>c; b>c>a; c>a>b");
        assert_eq!(cycle.condorcet_winner(), None);
        assert_eq!(cycle.condorcet_loser(), None);
        let tie = p("a>b; b>a");
        assert_eq!(tie.condorcet_winner(), None);
    }

    #[test]
    fn near_unanimity_and_majority_tops() {
        let prof = p("a>b>c; a>c>b; b>c>a");
        assert_eq!(prof.near_unanimous_alternatives(), vec![x('a')]);
        assert_eq!(prof.absolute_majority_top(), Some(x('a')));
        let two = p("a>b>c; b>a>c");
        assert_eq!(two.near_unanimous_alternatives(), vec![x('a'), x('b')]);
        let half = p("a>b>c; a>b>c; b>a>c; c>a>b");
        assert_eq!(half.absolute_majority_top(), None);
        assert_eq!(p("a~b>c; a~b>c; c>a>b").near_unanimous_alternatives(), vec![]);
    }

    #[test]
    fn voter_and_alternative_permutations() {
        let prof = p("a>b>c; c>a~b");
        assert_eq!(prof.permute_voters(&[1, 0]).unwrap(), p("c>a~b; a>b>c"));
        assert_eq!(prof.permute_alternatives(&[1, 0, 2]).unwrap(), p("b>a>c; c>a~b"));
        assert!(prof.permute_voters(&[0, 0]).is_err());
        assert!(prof.with_voter(2, "a>b>c".parse().unwrap()).is_err());
    }
}
