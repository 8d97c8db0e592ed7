use std::fmt;

use crate::error::{Error, Result};
use crate::prefcore::ChoiceSet;

/// Largest number of alternatives a candidate set can range over: one bit
/// per non-empty choice set must fit in a `u64`.
pub const MAX_REPLAY_ALTERNATIVES: usize = 6;

/// A set of choice sets still admissible for one profile. Bit `k` stands for
/// the choice set whose bitmask is `k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct CandidateSet(u64);

impl CandidateSet {
    pub const EMPTY: CandidateSet = CandidateSet(0);

    /// Every non-empty subset of `m` alternatives.
    pub fn all(m: usize) -> Result<Self> {
        check_m(m)?;
        Ok(CandidateSet(((1u128 << (1usize << m)) - 2) as u64))
    }

    pub fn only(x: ChoiceSet) -> Self {
        CandidateSet(1 << x.bits())
    }

    /// Every non-empty subset of `x`.
    pub fn subsets_of(x: ChoiceSet) -> Self {
        let mut out = 0u64;
        let full = x.bits();
        let mut sub = full;
        while sub != 0 {
            out |= 1 << sub;
            sub = (sub - 1) & full;
        }
        CandidateSet(out)
    }

    pub fn from_sets<I: IntoIterator<Item = ChoiceSet>>(sets: I) -> Self {
        CandidateSet(sets.into_iter().fold(0, |acc, x| acc | 1 << x.bits()))
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, x: ChoiceSet) -> bool {
        x.bits() < 64 && self.0 >> x.bits() & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// The only candidate, if exactly one is left.
    pub fn single(self) -> Option<ChoiceSet> {
        (self.len() == 1).then(|| ChoiceSet::from_bits_unchecked(self.0.trailing_zeros() as u16))
    }

    /// Candidates in increasing bitmask order.
    pub fn iter(self) -> impl Iterator<Item = ChoiceSet> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let k = rest.trailing_zeros();
            rest &= rest - 1;
            Some(ChoiceSet::from_bits_unchecked(k as u16))
        })
    }

    pub fn intersect(self, other: CandidateSet) -> CandidateSet {
        CandidateSet(self.0 & other.0)
    }

    pub fn union(self, other: CandidateSet) -> CandidateSet {
        CandidateSet(self.0 | other.0)
    }

    pub fn minus(self, other: CandidateSet) -> CandidateSet {
        CandidateSet(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: CandidateSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Keeps the candidates satisfying `keep`.
    pub fn filter<F: FnMut(ChoiceSet) -> bool>(self, mut keep: F) -> CandidateSet {
        CandidateSet::from_sets(self.iter().filter(|&x| keep(x)))
    }
}

/// Renders as `{a} | {a,b}`; the empty set renders as `none`.
impl fmt::Display for CandidateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("none");
        }
        for (k, x) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

pub(crate) fn check_m(m: usize) -> Result<()> {
    if m == 0 || m > MAX_REPLAY_ALTERNATIVES {
        return Err(Error::Capacity(format!(
            "proof replay supports 1 to {MAX_REPLAY_ALTERNATIVES} alternatives, got {m}"
        )));
    }
    Ok(())
}

/// Candidate sets indexed by engine variable. Several profiles share a
/// variable when the scenario collapses a signature class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateMap {
    pub(crate) sets: Vec<CandidateSet>,
}

impl CandidateMap {
    pub fn get(&self, var: usize) -> CandidateSet {
        self.sets[var]
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// The first variable without candidates.
    pub fn contradiction(&self) -> Option<usize> {
        self.sets.iter().position(|s| s.is_empty())
    }

    /// Sum of candidate counts over all variables.
    pub fn total(&self) -> usize {
        self.sets.iter().map(|s| s.len()).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = CandidateSet> + '_ {
        self.sets.iter().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> ChoiceSet {
        s.parse().unwrap()
    }

    #[test]
    fn full_sets() {
        assert_eq!(CandidateSet::all(3).unwrap().len(), 7);
        assert_eq!(CandidateSet::all(6).unwrap().len(), 63);
        assert!(CandidateSet::all(7).is_err());
        assert!(!CandidateSet::all(3).unwrap().contains(set("{d}")));
    }

    #[test]
    fn subsets_and_singles() {
        let s = CandidateSet::subsets_of(set("{a,c}"));
        assert_eq!(s.to_string(), "{a} | {c} | {a,c}");
        assert_eq!(CandidateSet::only(set("{b}")).single(), Some(set("{b}")));
        assert_eq!(s.single(), None);
        assert_eq!(CandidateSet::EMPTY.to_string(), "none");
    }

    #[test]
    fn set_algebra() {
        let all = CandidateSet::all(3).unwrap();
        let ac = CandidateSet::subsets_of(set("{a,c}"));
        assert_eq!(all.minus(ac).len(), 4);
        assert_eq!(all.intersect(ac), ac);
        assert!(ac.is_subset_of(all));
        assert_eq!(all.filter(|x| x.len() == 1).len(), 3);
    }
}
