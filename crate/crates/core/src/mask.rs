//! Subsets of a small ground set `[n]`, stored as bit vectors.
//!
//! Element `i` of `[n]` (1-based in all user-facing output) lives in bit
//! `i - 1`. Masks are ordered by cardinality first and then by the numeric
//! value of the bit pattern; this order is a linear extension of
//! containment and is the total order every lattice in this crate uses.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest supported ground set.
pub const MAX_GROUND: usize = 32;

/// A subset of `[n]` with `n <= 32`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    bits: u32,
    n: u8,
}

impl SubsetMask {
    /// The empty subset of `[n]`.
    ///
    /// Panics if `n > 32`.
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_GROUND, "ground set of size {n} exceeds {MAX_GROUND}");
        SubsetMask { bits: 0, n: n as u8 }
    }

    /// The whole ground set `[n]`.
    pub fn full(n: usize) -> Self {
        let mut m = Self::empty(n);
        m.bits = full_bits(n);
        m
    }

    /// Builds a mask from raw bits, or `None` if a bit at position `>= n` is set.
    pub fn from_bits(bits: u32, n: usize) -> Option<Self> {
        if n > MAX_GROUND || bits & !full_bits(n) != 0 {
            return None;
        }
        Some(SubsetMask { bits, n: n as u8 })
    }

    /// Builds a mask from 0-based element indices.
    pub fn from_indices<I: IntoIterator<Item = usize>>(n: usize, indices: I) -> Option<Self> {
        let mut m = Self::empty(n);
        for i in indices {
            if i >= n {
                return None;
            }
            m.bits |= 1 << i;
        }
        Some(m)
    }

    /// Builds a mask from 1-based element labels, as written in the papers and
    /// file formats (`{1, 2}` is `from_labels(n, [1, 2])`).
    pub fn from_labels<I: IntoIterator<Item = usize>>(n: usize, labels: I) -> Option<Self> {
        let mut idx = Vec::new();
        for l in labels {
            if l == 0 {
                return None;
            }
            idx.push(l - 1);
        }
        Self::from_indices(n, idx)
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn ground(self) -> usize {
        self.n as usize
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < self.ground() && self.bits & (1 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.ground());
        self.bits |= 1 << i;
    }

    pub fn union(self, other: Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        SubsetMask { bits: self.bits | other.bits, n: self.n }
    }

    pub fn intersection(self, other: Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        SubsetMask { bits: self.bits & other.bits, n: self.n }
    }

    pub fn difference(self, other: Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        SubsetMask { bits: self.bits & !other.bits, n: self.n }
    }

    /// `[n] \ self`.
    pub fn complement(self) -> Self {
        SubsetMask { bits: !self.bits & full_bits(self.ground()), n: self.n }
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_proper_subset(self, other: Self) -> bool {
        self.is_subset(other) && self.bits != other.bits
    }

    /// 0-based indices in increasing order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let bits = self.bits;
        (0..self.ground()).filter(move |&i| bits & (1 << i) != 0)
    }

    /// 1-based labels in increasing order.
    pub fn labels(self) -> Vec<usize> {
        self.indices().map(|i| i + 1).collect()
    }
}

fn full_bits(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

impl Ord for SubsetMask {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then(self.len().cmp(&other.len()))
            .then(self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for SubsetMask {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "{{}}");
        }
        write!(f, "{{")?;
        for (k, l) in self.labels().into_iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// Serialized as the list of 1-based labels; the ground size comes from the
// enclosing document.
impl Serialize for SubsetMask {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.labels().serialize(s)
    }
}

/// Labels as they appear in JSON documents, before the ground size is known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LabelList(pub Vec<usize>);

impl LabelList {
    pub fn into_mask(self, n: usize) -> Option<SubsetMask> {
        SubsetMask::from_labels(n, self.0)
    }
}

impl<'de> Deserialize<'de> for SubsetMask {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        // Without a ground size we take the smallest one that fits.
        let labels = Vec::<usize>::deserialize(d)?;
        let n = labels.iter().copied().max().unwrap_or(0);
        SubsetMask::from_labels(n, labels)
            .ok_or_else(|| serde::de::Error::custom("labels must be in 1..=32"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_cardinality_then_bits() {
        let n = 3;
        let a = SubsetMask::from_labels(n, [3]).unwrap();
        let b = SubsetMask::from_labels(n, [1, 2]).unwrap();
        let c = SubsetMask::from_labels(n, [1, 3]).unwrap();
        assert!(a < b);
        assert!(b < c);
        assert!(SubsetMask::empty(n) < a);
        assert!(c < SubsetMask::full(n));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(SubsetMask::from_bits(0b100, 2).is_none());
        assert!(SubsetMask::from_labels(2, [3]).is_none());
        assert!(SubsetMask::from_labels(2, [0]).is_none());
    }

    #[test]
    fn full_32() {
        let f = SubsetMask::full(32);
        assert_eq!(f.len(), 32);
        assert!(f.complement().is_empty());
    }

    #[test]
    fn display() {
        assert_eq!(SubsetMask::from_labels(4, [1, 3]).unwrap().to_string(), "{1,3}");
        assert_eq!(SubsetMask::empty(4).to_string(), "{}");
    }
}
