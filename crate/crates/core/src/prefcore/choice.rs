use std::fmt;
use std::str::FromStr;

use super::{Alternative, MAX_ALTERNATIVES};
use crate::error::{Error, Result};

/// A non-empty set of alternatives, the output of every social choice
/// function. Stored as a bitmask over alternative indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChoiceSet(u16);

impl ChoiceSet {
    pub fn from_bits(bits: u16) -> Result<Self> {
        if bits == 0 {
            Err(Error::domain("choice sets must be non-empty"))
        } else if bits >> MAX_ALTERNATIVES != 0 {
            Err(Error::domain(format!(
                "choice set mask {bits:#x} names alternatives beyond {MAX_ALTERNATIVES}"
            )))
        } else {
            Ok(ChoiceSet(bits))
        }
    }

    /// Caller guarantees a non-empty mask within range.
    pub(crate) const fn from_bits_unchecked(bits: u16) -> Self {
        debug_assert!(bits != 0);
        ChoiceSet(bits)
    }

    pub fn singleton(x: Alternative) -> Self {
        ChoiceSet(1 << x.index())
    }

    /// The set of all `m` alternatives.
    pub fn full(m: usize) -> Result<Self> {
        if m == 0 || m > MAX_ALTERNATIVES {
            return Err(Error::domain(format!("m = {m} is outside 1..={MAX_ALTERNATIVES}")));
        }
        Ok(ChoiceSet(((1u32 << m) - 1) as u16))
    }

    pub fn from_alternatives<I: IntoIterator<Item = Alternative>>(xs: I) -> Result<Self> {
        Self::from_bits(xs.into_iter().fold(0, |acc, x| acc | 1 << x.index()))
    }

    pub const fn bits(self) -> u16 {
        self.0
    }

    pub fn contains(self, x: Alternative) -> bool {
        self.0 >> x.index() & 1 == 1
    }

    #[allow(clippy::len_without_is_empty)] // never empty
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_singleton(self) -> bool {
        self.0.is_power_of_two()
    }

    /// Smallest member by index.
    pub fn first(self) -> Alternative {
        Alternative::nth(self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = Alternative> {
        let bits = self.0;
        (0..MAX_ALTERNATIVES).filter(move |i| bits >> i & 1 == 1).map(Alternative::nth)
    }

    pub fn is_subset_of(self, other: ChoiceSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: ChoiceSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(self, other: ChoiceSet) -> ChoiceSet {
        ChoiceSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ChoiceSet) -> Option<ChoiceSet> {
        let bits = self.0 & other.0;
        (bits != 0).then_some(ChoiceSet(bits))
    }

    pub fn without(self, x: Alternative) -> Option<ChoiceSet> {
        let bits = self.0 & !(1 << x.index());
        (bits != 0).then_some(ChoiceSet(bits))
    }

    /// Whether every member is one of the first `m` alternatives.
    pub fn fits(self, m: usize) -> bool {
        m >= MAX_ALTERNATIVES || self.0 >> m == 0
    }

    pub(crate) fn check(self, m: usize) -> Result<Self> {
        if self.fits(m) {
            Ok(self)
        } else {
            Err(Error::domain(format!("{self} is not a subset of the {m} alternatives")))
        }
    }

    /// Relabels members: `x` becomes `perm[x]`.
    pub fn permute(self, perm: &[usize]) -> ChoiceSet {
        ChoiceSet(self.iter().fold(0, |acc, x| acc | 1 << perm[x.index()]))
    }
}

impl fmt::Display for ChoiceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, x) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

/// Accepts `{a,b}`, `a,b`, `{a, b}` and `a b`.
impl FromStr for ChoiceSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        let inner = trimmed.strip_prefix('{').and_then(|t| t.strip_suffix('}')).unwrap_or(trimmed);
        let mut bits = 0u16;
        for (col, c) in inner.char_indices() {
            if c == ',' || c.is_whitespace() {
                continue;
            }
            let x = Alternative::from_letter(c)
                .ok_or_else(|| Error::parse(1, col + 1, format!("`{c}` is not an alternative")))?;
            bits |= 1 << x.index();
        }
        ChoiceSet::from_bits(bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_and_parse_round_trip() {
        for bits in 1..256u16 {
            let set = ChoiceSet::from_bits(bits).unwrap();
            assert_eq!(set.to_string().parse::<ChoiceSet>().unwrap(), set);
        }
        assert_eq!("{a, c}".parse::<ChoiceSet>().unwrap().bits(), 0b101);
        assert_eq!("b d".parse::<ChoiceSet>().unwrap().bits(), 0b1010);
    }

    #[test]
    fn empty_sets_are_rejected() {
        assert!(ChoiceSet::from_bits(0).is_err());
        assert!("{}".parse::<ChoiceSet>().is_err());
        assert!(ChoiceSet::from_alternatives([]).is_err());
    }

    #[test]
    fn set_operations() {
        let ab: ChoiceSet = "{a,b}".parse().unwrap();
        let bc: ChoiceSet = "{b,c}".parse().unwrap();
        assert_eq!(ab.intersection(bc).unwrap().to_string(), "{b}");
        assert_eq!(ab.union(bc).len(), 3);
        assert!(ab.without(Alternative::nth(0)).unwrap().is_singleton());
        assert!(ChoiceSet::singleton(Alternative::nth(0)).without(Alternative::nth(0)).is_none());
        assert!(!ab.fits(1) && ab.fits(2));
        assert_eq!(bc.permute(&[1, 2, 0]).to_string(), "{a,c}");
    }
}
