use std::fmt;
use std::str::FromStr;

use super::{Alternative, ChoiceSet, MAX_ALTERNATIVES};
use crate::error::{Error, Result};

/// One voter's complete, transitive and reflexive ranking.
///
/// Stored as a level per alternative, lower is better. Levels are always
/// canonical: they form the contiguous range `0..L` and no level is empty, so
/// two orders are equal exactly when they induce the same relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeakOrder {
    m: u8,
    levels: [u8; MAX_ALTERNATIVES],
}

/// `(strict_above, tie_class)` of an alternative in one order. The tie class
/// counts the alternative itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RankTuple {
    pub strict_above: u8,
    pub tie_class: u8,
}

impl WeakOrder {
    /// Builds an order from arbitrary levels, compressing them to canonical
    /// form. `levels[x]` is the level of alternative `x`.
    pub fn from_levels(levels: &[usize]) -> Result<Self> {
        let m = levels.len();
        if m == 0 || m > MAX_ALTERNATIVES {
            return Err(Error::domain(format!(
                "an order needs between 1 and {MAX_ALTERNATIVES} alternatives, got {m}"
            )));
        }
        let mut distinct: Vec<usize> = levels.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let mut out = [0u8; MAX_ALTERNATIVES];
        for (x, level) in levels.iter().enumerate() {
            out[x] = distinct.binary_search(level).expect("level present") as u8;
        }
        Ok(WeakOrder { m: m as u8, levels: out })
    }

    /// Builds an order from its indifference classes, best class first. The
    /// classes must partition the `m` alternatives.
    pub fn from_classes(m: usize, classes: &[ChoiceSet]) -> Result<Self> {
        let full = ChoiceSet::full(m)?;
        let mut seen = 0u16;
        let mut levels = vec![0; m];
        for (level, class) in classes.iter().enumerate() {
            class.check(m)?;
            if seen & class.bits() != 0 {
                return Err(Error::domain(format!("{class} overlaps an earlier class")));
            }
            seen |= class.bits();
            for x in class.iter() {
                levels[x.index()] = level;
            }
        }
        if seen != full.bits() {
            return Err(Error::domain("indifference classes do not cover all alternatives"));
        }
        Self::from_levels(&levels)
    }

    /// A strict order listing alternative indices best first.
    pub fn strict(ranking: &[usize]) -> Result<Self> {
        let m = ranking.len();
        let classes = ranking
            .iter()
            .map(|&x| Alternative::new(x).map(ChoiceSet::singleton))
            .collect::<Result<Vec<_>>>()?;
        Self::from_classes(m, &classes)
    }

    /// The order in which all alternatives are tied.
    pub fn indifferent(m: usize) -> Result<Self> {
        Self::from_levels(&vec![0; m])
    }

    /// Builds an order from a relation matrix, `weak[x][y]` meaning x is at
    /// least as good as y. Fails unless the relation is complete and
    /// transitive.
    pub fn from_relation(weak: &[Vec<bool>]) -> Result<Self> {
        let m = weak.len();
        if weak.iter().any(|row| row.len() != m) {
            return Err(Error::domain("relation matrix is not square"));
        }
        for x in 0..m {
            for y in 0..m {
                if !weak[x][y] && !weak[y][x] {
                    return Err(Error::domain("relation is not complete"));
                }
                for z in 0..m {
                    if weak[x][y] && weak[y][z] && !weak[x][z] {
                        return Err(Error::domain("relation is not transitive"));
                    }
                }
            }
        }
        // Level of x = number of distinct classes strictly above it; counting
        // alternatives strictly above gives the same order, and from_levels
        // compresses it.
        let levels: Vec<usize> =
            (0..m).map(|x| (0..m).filter(|&y| weak[y][x] && !weak[x][y]).count()).collect();
        Self::from_levels(&levels)
    }

    /// The relation matrix, `out[x][y]` meaning x is at least as good as y.
    pub fn relation(&self) -> Vec<Vec<bool>> {
        let m = self.m();
        (0..m).map(|x| (0..m).map(|y| self.levels[x] <= self.levels[y]).collect()).collect()
    }

    pub fn m(&self) -> usize {
        self.m as usize
    }

    /// Canonical level per alternative.
    pub fn levels(&self) -> &[u8] {
        &self.levels[..self.m()]
    }

    pub fn level(&self, x: Alternative) -> usize {
        self.levels[x.index()] as usize
    }

    pub fn num_levels(&self) -> usize {
        self.levels().iter().max().map_or(0, |&l| l as usize + 1)
    }

    /// Alternatives on the given level.
    pub fn class(&self, level: usize) -> Option<ChoiceSet> {
        let bits = self
            .levels()
            .iter()
            .enumerate()
            .filter(|(_, &l)| l as usize == level)
            .fold(0u16, |acc, (x, _)| acc | 1 << x);
        ChoiceSet::from_bits(bits).ok()
    }

    /// Indifference classes, best first.
    pub fn classes(&self) -> Vec<ChoiceSet> {
        (0..self.num_levels()).filter_map(|l| self.class(l)).collect()
    }

    pub fn top_class(&self) -> ChoiceSet {
        self.class(0).expect("level 0 is never empty")
    }

    pub fn bottom_class(&self) -> ChoiceSet {
        self.class(self.num_levels() - 1).expect("last level is never empty")
    }

    /// The top alternative when it is alone in the top class.
    pub fn unique_top(&self) -> Option<Alternative> {
        let top = self.top_class();
        top.is_singleton().then(|| top.first())
    }

    pub fn prefers(&self, x: Alternative, y: Alternative) -> bool {
        self.levels[x.index()] < self.levels[y.index()]
    }

    pub fn weakly_prefers(&self, x: Alternative, y: Alternative) -> bool {
        self.levels[x.index()] <= self.levels[y.index()]
    }

    pub fn indifferent_between(&self, x: Alternative, y: Alternative) -> bool {
        self.levels[x.index()] == self.levels[y.index()]
    }

    pub fn is_strict(&self) -> bool {
        self.num_levels() == self.m()
    }

    pub fn is_fully_indifferent(&self) -> bool {
        self.num_levels() == 1
    }

    pub(crate) fn rank_tuple_unchecked(&self, x: Alternative) -> RankTuple {
        let lx = self.levels[x.index()];
        let mut above = 0;
        let mut tied = 0;
        for &l in self.levels() {
            if l < lx {
                above += 1;
            } else if l == lx {
                tied += 1;
            }
        }
        RankTuple { strict_above: above, tie_class: tied }
    }

    /// Best and worst level among the members of `set` (bits as a mask).
    pub(crate) fn level_span(&self, bits: u16) -> (u8, u8) {
        let mut lo = u8::MAX;
        let mut hi = 0;
        for x in 0..self.m() {
            if bits >> x & 1 == 1 {
                lo = lo.min(self.levels[x]);
                hi = hi.max(self.levels[x]);
            }
        }
        (lo, hi)
    }

    /// Kelly comparison without range checks.
    pub(crate) fn kelly_unchecked(&self, x: ChoiceSet, y: ChoiceSet) -> bool {
        let (x_best, x_worst) = self.level_span(x.bits());
        let (y_best, y_worst) = self.level_span(y.bits());
        x_worst <= y_best && x_best < y_worst
    }

    /// Relabels alternatives: `x` becomes `perm[x]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let m = self.m();
        check_permutation(perm, m, "alternative")?;
        let mut levels = vec![0; m];
        for x in 0..m {
            levels[perm[x]] = self.levels[x] as usize;
        }
        Self::from_levels(&levels)
    }

    /// Parses the rendering produced by `Display`, resolving each name token
    /// through `resolve`. Class members may be joined by `~` or `,` and
    /// wrapped in braces; classes are separated by `>`. Columns in errors are
    /// 1-based offsets into `s`.
    pub fn parse_with<F>(s: &str, m: usize, mut resolve: F) -> Result<Self>
    where
        F: FnMut(&str, usize) -> Result<usize>,
    {
        let mut levels: Vec<Option<usize>> = vec![None; m];
        let mut offset = 0;
        for (level, class) in s.split('>').enumerate() {
            let mut members = 0;
            let mut tok_start = None;
            let bytes = class.as_bytes();
            for pos in 0..=bytes.len() {
                let c = bytes.get(pos).copied();
                let is_name = matches!(c, Some(b) if b.is_ascii_alphanumeric() || b == b'_');
                match (is_name, tok_start) {
                    (true, None) => tok_start = Some(pos),
                    (false, Some(start)) => {
                        let col = offset + start + 1;
                        let x = resolve(&class[start..pos], col)?;
                        if x >= m {
                            return Err(Error::parse(
                                1,
                                col,
                                format!("`{}` is out of range", &class[start..pos]),
                            ));
                        }
                        if levels[x].is_some() {
                            return Err(Error::parse(
                                1,
                                col,
                                format!("`{}` appears twice", &class[start..pos]),
                            ));
                        }
                        levels[x] = Some(level);
                        members += 1;
                        tok_start = None;
                    }
                    _ => {}
                }
                if let Some(b) = c {
                    if !is_name && !matches!(b, b'~' | b',' | b'{' | b'}' | b' ' | b'\t' | b'\r') {
                        return Err(Error::parse(1, offset + pos + 1, format!("unexpected `{}`", b as char)));
                    }
                }
            }
            if members == 0 {
                return Err(Error::parse(1, offset + 1, "empty indifference class"));
            }
            offset += class.len() + 1;
        }
        if let Some(x) = levels.iter().position(Option::is_none) {
            return Err(Error::parse(1, s.len().max(1), format!("alternative #{} is not ranked", x + 1)));
        }
        Self::from_levels(&levels.into_iter().map(Option::unwrap).collect::<Vec<_>>())
    }
}

impl fmt::Display for WeakOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, class) in self.classes().into_iter().enumerate() {
            if k > 0 {
                f.write_str(" > ")?;
            }
            for (j, x) in class.iter().enumerate() {
                if j > 0 {
                    f.write_str("~")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

/// Parses letter names. The number of alternatives is the number of distinct
/// letters, which must be `a`, `b`, ... without gaps.
impl FromStr for WeakOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let m = s
            .chars()
            .filter_map(Alternative::from_letter)
            .map(|x| x.index() + 1)
            .max()
            .ok_or_else(|| Error::parse(1, 1, "no alternatives"))?;
        Self::parse_with(s, m, resolve_letter)
    }
}

/// Name resolver for letter-named alternatives.
pub(crate) fn resolve_letter(name: &str, col: usize) -> Result<usize> {
    let mut chars = name.chars();
    match (chars.next().and_then(Alternative::from_letter), chars.next()) {
        (Some(x), None) => Ok(x.index()),
        _ => Err(Error::parse(1, col, format!("`{name}` is not a letter a..h"))),
    }
}

pub(crate) fn check_permutation(perm: &[usize], len: usize, what: &str) -> Result<()> {
    if perm.len() != len {
        return Err(Error::domain(format!("{what} permutation has length {}, expected {len}", perm.len())));
    }
    let mut seen = vec![false; len];
    for &p in perm {
        if p >= len || std::mem::replace(&mut seen[p], true) {
            return Err(Error::domain(format!("{perm:?} is not a permutation of 0..{len}")));
        }
    }
    Ok(())
}

/// Rank tuple of `x` in `order`.
pub fn rank_tuple(order: &WeakOrder, x: Alternative) -> Result<RankTuple> {
    x.check(order.m())?;
    Ok(order.rank_tuple_unchecked(x))
}

/// Kelly's strict comparison: every member of `x` is weakly above every
/// member of `y` and some pair is strict.
pub fn kelly_strictly_prefers(order: &WeakOrder, x: ChoiceSet, y: ChoiceSet) -> Result<bool> {
    x.check(order.m())?;
    y.check(order.m())?;
    Ok(order.kelly_unchecked(x, y))
}
