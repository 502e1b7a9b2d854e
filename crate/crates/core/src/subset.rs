//! Subsets of the ground set `[n]` stored as bitmasks.
//!
//! Bit `i` represents element `i + 1`; all user-facing renderings are 1-based.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Largest ground set a [`SubsetId`] can address.
pub const MAX_GROUND: usize = 16;

/// A subset of `[n]`, `n <= 16`, as a bitmask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetId(u16);

impl SubsetId {
    pub const EMPTY: SubsetId = SubsetId(0);

    pub const fn from_mask(mask: u16) -> Self {
        SubsetId(mask)
    }

    /// The full ground set `[n]`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_GROUND);
        if n == MAX_GROUND {
            SubsetId(u16::MAX)
        } else {
            SubsetId(((1u32 << n) - 1) as u16)
        }
    }

    /// The singleton holding zero-based element `i`.
    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < MAX_GROUND);
        SubsetId(1 << i)
    }

    /// Builds a subset from zero-based element indices.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        indices
            .into_iter()
            .fold(SubsetId::EMPTY, |s, i| s.with(i))
    }

    pub const fn mask(self) -> u16 {
        self.0
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn contains(self, i: usize) -> bool {
        i < MAX_GROUND && self.0 & (1 << i) != 0
    }

    pub const fn with(self, i: usize) -> Self {
        SubsetId(self.0 | (1 << i))
    }

    pub const fn without(self, i: usize) -> Self {
        SubsetId(self.0 & !(1 << i))
    }

    pub const fn union(self, other: Self) -> Self {
        SubsetId(self.0 | other.0)
    }

    pub const fn intersection(self, other: Self) -> Self {
        SubsetId(self.0 & other.0)
    }

    pub const fn difference(self, other: Self) -> Self {
        SubsetId(self.0 & !other.0)
    }

    pub const fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn intersects(self, other: Self) -> bool {
        self.0 & other.0 != 0
    }

    /// Complement within `[n]`.
    pub fn complement(self, n: usize) -> Self {
        SubsetId::full(n).difference(self)
    }

    /// True when every element lies in `[n]`.
    pub fn fits(self, n: usize) -> bool {
        self.is_subset_of(SubsetId::full(n))
    }

    /// Zero-based elements in increasing order.
    pub fn elements(self) -> Elements {
        Elements(self.0)
    }

    /// Smallest zero-based element.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// All subsets of `self` (including the empty set and `self`), in
    /// increasing mask order.
    pub fn subsets(self) -> Subsets {
        Subsets {
            of: self.0,
            next: Some(0),
        }
    }

    /// All nonempty subsets of `self` in increasing mask order.
    pub fn nonempty_subsets(self) -> impl Iterator<Item = SubsetId> {
        self.subsets().filter(|s| !s.is_empty())
    }

    /// Applies a relabeling of zero-based elements: element `i` maps to `perm[i]`.
    pub fn permute(self, perm: &[usize]) -> Self {
        self.elements()
            .fold(SubsetId::EMPTY, |s, i| s.with(perm[i]))
    }

    /// Comma-joined ascending 1-based indices, e.g. `"1,3"`; empty string for ∅.
    pub fn key(self) -> String {
        let mut out = String::new();
        for (pos, i) in self.elements().enumerate() {
            if pos > 0 {
                out.push(',');
            }
            out.push_str(&itoa(i + 1));
        }
        out
    }

    /// Parses a comma-separated list of 1-based indices (the [`SubsetId::key`] format).
    /// Whitespace around entries is ignored; the empty string is ∅.
    pub fn parse_key(key: &str) -> Option<Self> {
        let key = key.trim();
        if key.is_empty() {
            return Some(SubsetId::EMPTY);
        }
        let mut set = SubsetId::EMPTY;
        for part in key.split(',') {
            let idx: usize = part.trim().parse().ok()?;
            if idx == 0 || idx > MAX_GROUND || set.contains(idx - 1) {
                return None;
            }
            set = set.with(idx - 1);
        }
        Some(set)
    }

    /// All nonempty subsets of `[n]` (the server index set) in increasing mask order.
    pub fn all_nonempty(n: usize) -> impl Iterator<Item = SubsetId> {
        SubsetId::full(n).nonempty_subsets()
    }
}

fn itoa(v: usize) -> String {
    use core::fmt::Write;
    let mut s = String::new();
    let _ = write!(s, "{v}");
    s
}

impl fmt::Display for SubsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.key())
    }
}

/// Iterator over the zero-based elements of a subset.
pub struct Elements(u16);

impl Iterator for Elements {
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

impl ExactSizeIterator for Elements {}

/// Iterator over all submasks of a mask, ascending.
pub struct Subsets {
    of: u16,
    next: Option<u16>,
}

impl Iterator for Subsets {
    type Item = SubsetId;

    fn next(&mut self) -> Option<SubsetId> {
        let cur = self.next?;
        // Ascending submask enumeration: increment within the bits of `of`.
        self.next = if cur == self.of {
            None
        } else {
            Some((cur | !self.of).wrapping_add(1) & self.of)
        };
        Some(SubsetId(cur))
    }
}

/// Collects the elements of a subset into a vector (1-based).
pub fn one_based(s: SubsetId) -> Vec<usize> {
    s.elements().map(|i| i + 1).collect()
}
