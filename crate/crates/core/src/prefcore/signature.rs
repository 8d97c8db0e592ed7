//! Anonymized summaries of a profile. Each one defines a class of social
//! choice functions: those whose output only depends on it.

use std::fmt;

use super::{Alternative, Profile, RankTuple, MAX_ALTERNATIVES};

/// Per alternative, the voters' rank tuples sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RankMatrix {
    rows: Vec<Vec<RankTuple>>,
}

impl RankMatrix {
    pub fn of(profile: &Profile) -> Self {
        let rows = profile
            .alternatives()
            .map(|x| {
                let mut row: Vec<RankTuple> =
                    profile.voters().iter().map(|v| v.rank_tuple_unchecked(x)).collect();
                row.sort_unstable();
                row
            })
            .collect();
        RankMatrix { rows }
    }

    pub fn row(&self, x: Alternative) -> &[RankTuple] {
        &self.rows[x.index()]
    }

    pub fn rows(&self) -> &[Vec<RankTuple>] {
        &self.rows
    }
}

impl fmt::Display for RankMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (x, row) in self.rows.iter().enumerate() {
            write!(f, "{}:", Alternative::nth(x))?;
            for t in row {
                write!(f, " ({},{})", t.strict_above, t.tie_class)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// `s[x][y]`: number of voters strictly preferring `x` to `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SupportMatrix {
    m: u8,
    n: u16,
    s: [[u16; MAX_ALTERNATIVES]; MAX_ALTERNATIVES],
}

impl SupportMatrix {
    pub fn of(profile: &Profile) -> Self {
        let m = profile.m();
        let mut s = [[0u16; MAX_ALTERNATIVES]; MAX_ALTERNATIVES];
        for v in profile.voters() {
            let levels = v.levels();
            for x in 0..m {
                for y in 0..m {
                    s[x][y] += u16::from(levels[x] < levels[y]);
                }
            }
        }
        SupportMatrix { m: m as u8, n: profile.n() as u16, s }
    }

    pub fn m(&self) -> usize {
        self.m as usize
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn get(&self, x: Alternative, y: Alternative) -> usize {
        self.s[x.index()][y.index()] as usize
    }

    pub fn margin(&self, x: Alternative, y: Alternative) -> i32 {
        self.get(x, y) as i32 - self.get(y, x) as i32
    }

    pub fn margins(&self) -> MarginMatrix {
        let mut d = [[0i16; MAX_ALTERNATIVES]; MAX_ALTERNATIVES];
        for (x, row) in d.iter_mut().enumerate().take(self.m()) {
            for (y, cell) in row.iter_mut().enumerate().take(self.m()) {
                *cell = self.s[x][y] as i16 - self.s[y][x] as i16;
            }
        }
        MarginMatrix { m: self.m, d }
    }

    pub fn majority(&self) -> MajorityRelation {
        let mut bits = 0u64;
        for x in 0..self.m() {
            for y in 0..self.m() {
                if self.s[x][y] >= self.s[y][x] {
                    bits |= 1 << (x * MAX_ALTERNATIVES + y);
                }
            }
        }
        MajorityRelation { m: self.m, bits }
    }
}

/// `d[x][y] = s[x][y] - s[y][x]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MarginMatrix {
    m: u8,
    d: [[i16; MAX_ALTERNATIVES]; MAX_ALTERNATIVES],
}

impl MarginMatrix {
    pub fn m(&self) -> usize {
        self.m as usize
    }

    pub fn get(&self, x: Alternative, y: Alternative) -> i32 {
        self.d[x.index()][y.index()] as i32
    }
}

/// `x R y` iff `s[x][y] >= s[y][x]`. Complete by construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MajorityRelation {
    m: u8,
    bits: u64,
}

impl MajorityRelation {
    pub fn m(&self) -> usize {
        self.m as usize
    }

    pub fn holds(&self, x: Alternative, y: Alternative) -> bool {
        self.bits >> (x.index() * MAX_ALTERNATIVES + y.index()) & 1 == 1
    }

    /// Strict majority: `x R y` but not `y R x`.
    pub fn strictly(&self, x: Alternative, y: Alternative) -> bool {
        self.holds(x, y) && !self.holds(y, x)
    }
}

fn write_grid(
    f: &mut fmt::Formatter<'_>,
    m: usize,
    cell: impl Fn(Alternative, Alternative) -> String,
) -> fmt::Result {
    let cells: Vec<Vec<String>> = Alternative::all(m)
        .map(|x| Alternative::all(m).map(|y| if x == y { "-".into() } else { cell(x, y) }).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    write!(f, " ")?;
    for y in Alternative::all(m) {
        write!(f, " {y:>width$}")?;
    }
    writeln!(f)?;
    for (x, row) in Alternative::all(m).zip(&cells) {
        write!(f, "{x}")?;
        for c in row {
            write!(f, " {c:>width$}")?;
        }
        writeln!(f)?;
    }
    Ok(())
}

impl fmt::Display for SupportMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_grid(f, self.m(), |x, y| self.get(x, y).to_string())
    }
}

impl fmt::Display for MarginMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_grid(f, self.m(), |x, y| self.get(x, y).to_string())
    }
}

impl fmt::Display for MajorityRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_grid(f, self.m(), |x, y| u8::from(self.holds(x, y)).to_string())
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

    fn rt(strict_above: u8, tie_class: u8) -> RankTuple {
        RankTuple { strict_above, tie_class }
    }

    #[test]
    fn rank_matrix_rows_are_sorted() {
        let r = p("a>b>c; c>b>a").rank_matrix();
        assert_eq!(r.row(x('a')), &[rt(0, 1), rt(2, 1)]);
        assert_eq!(r.row(x('c')), &[rt(0, 1), rt(2, 1)]);
        assert_eq!(r.row(x('b')), &[rt(1, 1), rt(1, 1)]);
        let r = p("a~b~c").rank_matrix();
        assert!(r.rows().iter().all(|row| row == &[rt(0, 3)]));
    }

    #[test]
    fn support_of_unanimous_and_indifferent_profiles() {
        let s = p("a>b>c; a>b>c; a>b>c").support_matrix();
        assert_eq!((s.get(x('a'), x('b')), s.get(x('a'), x('c')), s.get(x('b'), x('c'))), (3, 3, 3));
        assert_eq!(s.get(x('b'), x('a')) + s.get(x('c'), x('a')) + s.get(x('c'), x('b')), 0);
        let s = p("a~b~c; a~b~c").support_matrix();
        assert!(Alternative::all(3).all(|u| Alternative::all(3).all(|v| s.get(u, v) == 0)));
    }

    #[test]
    fn majority_relation_cases() {
        let maj = p("a>b>c").majority_relation();
        assert!(maj.strictly(x('a'), x('b')) && maj.strictly(x('a'), x('c')) && maj.strictly(x('b'), x('c')));
        assert!(!maj.holds(x('b'), x('a')));
        let tie = p("a>b; b>a").majority_relation();
        assert!(tie.holds(x('a'), x('b')) && tie.holds(x('b'), x('a')));
        let cyc = p("a>b>c; b>c>a; c>a>b").majority_relation();
        assert!(cyc.strictly(x('a'), x('b')) && cyc.strictly(x('b'), x('c')) && cyc.strictly(x('c'), x('a')));
    }

    #[test]
    fn tied_margins_are_zero() {
        let d = p("a>b; b>a").margin_matrix();
        assert_eq!(d.get(x('a'), x('b')), 0);
        assert_eq!(d.get(x('b'), x('a')), 0);
    }

    #[test]
    fn grid_rendering_is_stable() {
        let text = p("a>b>c; c>b>a; a>c>b").support_matrix().to_string();
        assert_eq!(text, "  a b c\na - 2 2\nb 1 - 1\nc 1 2 -\n");
    }
}
