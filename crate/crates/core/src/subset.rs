//! Word-sized subsets of a carrier with at most 64 elements.

use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

/// Largest carrier (and largest point set) a [`Subset`] can index.
pub const MAX_ELEMENTS: usize = 64;

/// A subset of `{0, .., 63}` stored as a single machine word.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset(pub u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_ELEMENTS);
        if n == MAX_ELEMENTS {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < MAX_ELEMENTS);
        Subset(1u64 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(items: I) -> Self {
        items.into_iter().fold(Subset::EMPTY, |acc, i| acc.with(i))
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        i < MAX_ELEMENTS && self.0 >> i & 1 == 1
    }

    /// Inserts `i`, returning whether it was absent.
    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        let before = self.0;
        self.0 |= 1u64 << i;
        before != self.0
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u64 << i);
    }

    #[inline]
    pub fn with(self, i: usize) -> Self {
        Subset(self.0 | 1u64 << i)
    }

    #[inline]
    pub fn without(self, i: usize) -> Self {
        Subset(self.0 & !(1u64 << i))
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        Subset(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        Subset(self.0 & other.0)
    }

    #[inline]
    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    pub fn iter(self) -> SubsetIter {
        SubsetIter(self.0)
    }
}

/// Ascending iterator over the members of a [`Subset`].
#[derive(Clone)]
pub struct SubsetIter(u64);

impl Iterator for SubsetIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for SubsetIter {}

impl IntoIterator for Subset {
    type Item = usize;
    type IntoIter = SubsetIter;

    fn into_iter(self) -> SubsetIter {
        self.iter()
    }
}

impl FromIterator<usize> for Subset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Subset::from_indices(iter)
    }
}

impl BitAnd for Subset {
    type Output = Subset;
    fn bitand(self, rhs: Subset) -> Subset {
        self.intersection(rhs)
    }
}

impl BitOr for Subset {
    type Output = Subset;
    fn bitor(self, rhs: Subset) -> Subset {
        self.union(rhs)
    }
}

impl Sub for Subset {
    type Output = Subset;
    fn sub(self, rhs: Subset) -> Subset {
        Subset(self.0 & !rhs.0)
    }
}

impl Not for Subset {
    type Output = Subset;
    fn not(self) -> Subset {
        Subset(!self.0)
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn full_and_edges() {
        assert_eq!(Subset::full(0), Subset::EMPTY);
        assert_eq!(Subset::full(3).bits(), 0b111);
        assert_eq!(Subset::full(64).len(), 64);
        assert!(Subset::full(64).contains(63));
        assert!(!Subset::full(3).contains(64));
    }

    #[test]
    fn insert_reports_change() {
        let mut s = Subset::EMPTY;
        assert!(s.insert(5));
        assert!(!s.insert(5));
        s.remove(5);
        assert!(s.is_empty());
    }

    proptest! {
        #[test]
        fn iter_round_trips(bits in any::<u64>()) {
            let s = Subset(bits);
            let back: Subset = s.iter().collect();
            prop_assert_eq!(back, s);
            prop_assert_eq!(s.iter().len(), s.len());
        }

        #[test]
        fn subset_matches_intersection(a in any::<u64>(), b in any::<u64>()) {
            let (a, b) = (Subset(a), Subset(b));
            prop_assert_eq!(a.is_subset(b), a & b == a);
            prop_assert!((a & b).is_subset(a | b));
        }
    }
}
