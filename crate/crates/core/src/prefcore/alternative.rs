use std::fmt;

use super::MAX_ALTERNATIVES;
use crate::error::{Error, Result};

/// An alternative, identified by its index. Rendered as a lowercase letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alternative(u8);

impl Alternative {
    pub fn new(index: usize) -> Result<Self> {
        if index < MAX_ALTERNATIVES {
            Ok(Alternative(index as u8))
        } else {
            Err(Error::domain(format!("alternative index {index} exceeds the limit of {MAX_ALTERNATIVES}")))
        }
    }

    /// Panics on an out-of-range index. For literals in tests and tables.
    pub const fn nth(index: usize) -> Self {
        assert!(index < MAX_ALTERNATIVES);
        Alternative(index as u8)
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub fn letter(self) -> char {
        (b'a' + self.0) as char
    }

    pub fn from_letter(c: char) -> Option<Self> {
        let c = c as u32;
        let a = 'a' as u32;
        (c >= a && c < a + MAX_ALTERNATIVES as u32).then(|| Alternative((c - a) as u8))
    }

    /// All alternatives `0..m` in index order.
    pub fn all(m: usize) -> impl Iterator<Item = Alternative> + Clone {
        (0..m.min(MAX_ALTERNATIVES) as u8).map(Alternative)
    }

    pub(crate) fn check(self, m: usize) -> Result<Self> {
        if self.index() < m {
            Ok(self)
        } else {
            Err(Error::domain(format!("alternative {self} is not among the {m} alternatives")))
        }
    }
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letters_are_a_bijection() {
        for x in Alternative::all(MAX_ALTERNATIVES) {
            assert_eq!(Alternative::from_letter(x.letter()), Some(x));
        }
        assert_eq!(Alternative::from_letter('z'), None);
        assert_eq!(Alternative::from_letter('A'), None);
    }

    #[test]
    fn out_of_range_index_is_rejected() {
        assert!(Alternative::new(MAX_ALTERNATIVES).is_err());
        assert!(Alternative::nth(2).check(2).is_err());
    }
}
