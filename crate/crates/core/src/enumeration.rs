//! Exhaustive generators for orders, profiles and single-voter deviations.
//!
//! Orders are listed in lexicographic order of their canonical level vectors,
//! and a profile is identified by a mixed-radix number whose digits are the
//! voters' order indices (voter 0 most significant). Both orders are fixed, so
//! profile ids and therefore reported witnesses are stable across runs.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::prefcore::{Profile, WeakOrder, MAX_ALTERNATIVES};

/// The profile space `orders(m)^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DomainSpec {
    pub m: usize,
    pub n: usize,
    /// Only strict orders.
    pub strict_only: bool,
    /// Drop the order in which every alternative is tied.
    pub exclude_indifferent: bool,
}

impl DomainSpec {
    pub fn weak(m: usize, n: usize) -> Self {
        DomainSpec { m, n, strict_only: false, exclude_indifferent: false }
    }

    pub fn strict(m: usize, n: usize) -> Self {
        DomainSpec { m, n, strict_only: true, exclude_indifferent: false }
    }

    pub fn excluding_indifferent(self) -> Self {
        DomainSpec { exclude_indifferent: true, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.m > MAX_ALTERNATIVES {
            return Err(Error::domain(format!("m = {} is outside 1..={MAX_ALTERNATIVES}", self.m)));
        }
        if self.n == 0 {
            return Err(Error::domain("n must be at least 1"));
        }
        if self.exclude_indifferent && self.m == 1 {
            return Err(Error::domain("with m = 1 the only order is the indifferent one"));
        }
        Ok(())
    }

    /// Whether `order` belongs to this domain.
    pub fn admits(&self, order: &WeakOrder) -> bool {
        order.m() == self.m
            && (!self.strict_only || order.is_strict())
            && !(self.exclude_indifferent && order.is_fully_indifferent())
    }

    pub fn admits_profile(&self, profile: &Profile) -> bool {
        profile.n() == self.n && profile.voters().iter().all(|v| self.admits(v))
    }

    /// Number of orders in the domain.
    pub fn order_count(&self) -> usize {
        let base = if self.strict_only { (1..=self.m).product() } else { ordered_bell(self.m) as usize };
        base - usize::from(self.exclude_indifferent && !(self.strict_only && self.m > 1))
    }
}

/// Number of weak orders on `m` alternatives (ordered Bell / Fubini number).
pub fn ordered_bell(m: usize) -> u64 {
    // a(k) = sum_{j=1..k} C(k, j) a(k - j): choose the top class, rank the rest.
    let mut a = vec![1u64; m + 1];
    for k in 1..=m {
        let mut binom = 1u64;
        let mut total = 0u64;
        for j in 1..=k {
            binom = binom * (k - j + 1) as u64 / j as u64;
            total += binom * a[k - j];
        }
        a[k] = total;
    }
    a[m]
}

/// All orders of the domain, lexicographic in their level vectors.
pub fn all_orders(spec: &DomainSpec) -> Result<Vec<WeakOrder>> {
    spec.validate()?;
    let mut out = Vec::new();
    let mut levels = vec![0usize; spec.m];
    extend_orders(spec, 0, 0, &mut levels, &mut out);
    Ok(out)
}

/// Assigns levels to alternatives `x..` given that levels `0..used` are
/// already non-empty. A level vector is canonical iff every prefix uses a
/// contiguous range, which this recursion maintains; at the end all levels
/// up to the maximum must be used.
fn extend_orders(
    spec: &DomainSpec,
    x: usize,
    used: usize,
    levels: &mut Vec<usize>,
    out: &mut Vec<WeakOrder>,
) {
    let m = spec.m;
    if x == m {
        if (0..used).all(|l| levels.contains(&l)) {
            let order = WeakOrder::from_levels(levels).expect("valid levels");
            if spec.admits(&order) {
                out.push(order);
            }
        }
        return;
    }
    // Alternatives left must be able to fill any gap below `top`.
    for level in 0..m {
        let needed_above = (0..level).filter(|l| !levels[..x].contains(l)).count();
        let remaining = m - x - 1;
        if needed_above > remaining {
            break;
        }
        if spec.strict_only && levels[..x].contains(&level) {
            continue;
        }
        levels[x] = level;
        extend_orders(spec, x + 1, used.max(level + 1), levels, out);
    }
}

/// Identifier of a profile within a [`Domain`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProfileId(pub u64);

/// An enumerated profile space with order lookup tables.
#[derive(Clone, Debug)]
pub struct Domain {
    spec: DomainSpec,
    orders: Vec<WeakOrder>,
    index: HashMap<WeakOrder, usize>,
    /// `weights[i]` is the id stride of voter `i`.
    weights: Vec<u64>,
    len: u64,
}

impl Domain {
    /// Fails with a capacity error if the profile count does not fit in a
    /// `u64`.
    pub fn new(spec: DomainSpec) -> Result<Self> {
        let orders = all_orders(&spec)?;
        let k = orders.len() as u64;
        let mut weights = vec![1u64; spec.n];
        let mut len = 1u64;
        for i in (0..spec.n).rev() {
            weights[i] = len;
            len = len.checked_mul(k).ok_or_else(|| {
                Error::Capacity(format!("{k}^{} profiles do not fit in a 64-bit id", spec.n))
            })?;
        }
        let index = orders.iter().enumerate().map(|(i, o)| (*o, i)).collect();
        Ok(Domain { spec, orders, index, weights, len })
    }

    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }

    pub fn orders(&self) -> &[WeakOrder] {
        &self.orders
    }

    pub fn order_index(&self, order: &WeakOrder) -> Option<usize> {
        self.index.get(order).copied()
    }

    /// Number of profiles.
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Id stride of voter `i`'s digit.
    pub fn weight(&self, voter: usize) -> u64 {
        self.weights[voter]
    }

    pub fn encode(&self, profile: &Profile) -> Result<ProfileId> {
        if profile.n() != self.spec.n {
            return Err(Error::domain(format!(
                "profile has {} voters, domain has {}",
                profile.n(),
                self.spec.n
            )));
        }
        let mut id = 0u64;
        for (i, v) in profile.voters().iter().enumerate() {
            let digit = self.order_index(v).ok_or_else(|| {
                Error::domain(format!("order `{v}` of voter {} is outside the domain", i + 1))
            })?;
            id += digit as u64 * self.weights[i];
        }
        Ok(ProfileId(id))
    }

    /// Order index of voter `i` in profile `id`.
    pub fn digit(&self, id: ProfileId, voter: usize) -> usize {
        (id.0 / self.weights[voter] % self.orders.len() as u64) as usize
    }

    pub fn decode(&self, id: ProfileId) -> Result<Profile> {
        self.check_id(id)?;
        Ok(self.decode_unchecked(id))
    }

    pub(crate) fn decode_unchecked(&self, id: ProfileId) -> Profile {
        let voters = (0..self.spec.n).map(|i| self.orders[self.digit(id, i)]).collect();
        Profile::new(voters).expect("domain orders share m")
    }

    fn check_id(&self, id: ProfileId) -> Result<()> {
        if id.0 < self.len {
            Ok(())
        } else {
            Err(Error::domain(format!("profile id {} is beyond the {} profiles", id.0, self.len)))
        }
    }

    /// Streams every profile with its id, in id order.
    pub fn profiles(&self) -> ProfileIter<'_> {
        ProfileIter { domain: self, next: 0 }
    }

    /// Resumes streaming at `start`.
    pub fn profiles_from(&self, start: ProfileId) -> Result<ProfileIter<'_>> {
        if start.0 > self.len {
            return Err(Error::domain(format!("checkpoint {} is beyond the domain", start.0)));
        }
        Ok(ProfileIter { domain: self, next: start.0 })
    }

    /// Every profile that differs from `profile` exactly in voter `voter`'s
    /// order, in order-index order.
    pub fn deviations<'a>(
        &'a self,
        profile: &'a Profile,
        voter: usize,
    ) -> Result<impl Iterator<Item = Profile> + 'a> {
        let current = *profile.voter(voter)?;
        if profile.n() != self.spec.n {
            return Err(Error::domain("profile does not belong to this domain"));
        }
        Ok(self
            .orders
            .iter()
            .filter(move |o| **o != current)
            .map(move |o| profile.with_voter(voter, *o).expect("same shape")))
    }

    /// Whether the profile's voters appear in non-decreasing order index,
    /// i.e. it is the canonical member of its voter-permutation class. Only
    /// sound as a scan filter for anonymous properties.
    pub fn is_voter_canonical(&self, id: ProfileId) -> bool {
        (1..self.spec.n).all(|i| self.digit(id, i - 1) <= self.digit(id, i))
    }
}

/// Streaming iterator over `(id, profile)`; the next id is a resumable
/// checkpoint.
pub struct ProfileIter<'a> {
    domain: &'a Domain,
    next: u64,
}

impl ProfileIter<'_> {
    pub fn checkpoint(&self) -> ProfileId {
        ProfileId(self.next)
    }
}

impl Iterator for ProfileIter<'_> {
    type Item = (ProfileId, Profile);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.domain.len {
            return None;
        }
        let id = ProfileId(self.next);
        self.next += 1;
        Some((id, self.domain.decode_unchecked(id)))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.domain.len - self.next) as usize;
        (left, Some(left))
    }
}

/// Voter `i` of the result holds the order of voter `perm[i]`.
pub fn permute_voters(profile: &Profile, perm: &[usize]) -> Result<Profile> {
    profile.permute_voters(perm)
}

/// Relabels alternatives: `x` becomes `perm[x]`.
pub fn permute_alternatives(profile: &Profile, perm: &[usize]) -> Result<Profile> {
    profile.permute_alternatives(perm)
}

/// Inverse of a permutation given as an image table.
pub fn inverse_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// All permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // Next lexicographic permutation.
        let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}
