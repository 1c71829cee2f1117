//! Sublattices of the Boolean lattice `B_n`.
//!
//! A [`CoverLattice`] is a family of subsets of `[n]` that contains `∅` and
//! `[n]` and is closed under union and intersection. Meets and joins are
//! intersection and union. Elements are kept sorted by the total order of
//! [`SubsetMask`] (cardinality, then bit pattern), which extends containment.

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::mask::{SubsetMask, MAX_GROUND};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("family is empty")]
    EmptyFamily,
    #[error("ground set size {0} exceeds the maximum of {MAX_GROUND}")]
    GroundTooLarge(usize),
    #[error("element {0} does not live on the ground set [{1}]")]
    WrongGround(SubsetMask, usize),
    #[error("the empty set is missing")]
    MissingBottom,
    #[error("the full ground set is missing")]
    MissingTop,
    #[error("family is not closed: {0} and {1} have no {2} in the family")]
    NotClosed(SubsetMask, SubsetMask, &'static str),
    #[error("{0} is not an element of the lattice")]
    NotAnElement(SubsetMask),
    #[error("f is undefined at the bottom element")]
    BottomElement,
}

/// A validated sublattice of `B_n` with its Hasse diagram.
#[derive(Debug, Clone)]
pub struct CoverLattice {
    n: usize,
    elements: Vec<SubsetMask>,
    lower: Vec<Vec<usize>>,
    index: HashMap<SubsetMask, usize>,
}

/// An interval `[bottom, top]` of a lattice that is isomorphic to `B_rank`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BooleanInterval {
    pub bottom: SubsetMask,
    pub top: SubsetMask,
    pub rank: usize,
}

/// The label `(p, S)` of a resolution basis element: `p` in the lattice and
/// `S` a `≺`-sorted subset of its lower neighbors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BasisLabel {
    pub p: SubsetMask,
    #[serde(rename = "S")]
    pub s: Vec<SubsetMask>,
}

impl PartialEq for CoverLattice {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.elements == other.elements
    }
}

impl Eq for CoverLattice {}

impl CoverLattice {
    /// Validates `family` as a sublattice of `B_n`. Nothing is repaired: the
    /// first closure violation (in `≺` order) is reported, then a missing
    /// bottom or top.
    pub fn validate<I>(family: I, n: usize) -> Result<Self, LatticeError>
    where
        I: IntoIterator<Item = SubsetMask>,
    {
        if n > MAX_GROUND {
            return Err(LatticeError::GroundTooLarge(n));
        }
        let set: BTreeSet<SubsetMask> = family.into_iter().collect();
        if set.is_empty() {
            return Err(LatticeError::EmptyFamily);
        }
        if let Some(bad) = set.iter().find(|m| m.ground() != n) {
            return Err(LatticeError::WrongGround(*bad, n));
        }
        let elements: Vec<SubsetMask> = set.into_iter().collect();
        let members: HashSet<SubsetMask> = elements.iter().copied().collect();
        for (i, &p) in elements.iter().enumerate() {
            for &q in &elements[i + 1..] {
                if !members.contains(&p.union(q)) {
                    return Err(LatticeError::NotClosed(p, q, "union"));
                }
                if !members.contains(&p.intersection(q)) {
                    return Err(LatticeError::NotClosed(p, q, "intersection"));
                }
            }
        }
        if !members.contains(&SubsetMask::empty(n)) {
            return Err(LatticeError::MissingBottom);
        }
        if !members.contains(&SubsetMask::full(n)) {
            return Err(LatticeError::MissingTop);
        }
        Ok(Self::from_sorted(n, elements))
    }

    fn from_sorted(n: usize, elements: Vec<SubsetMask>) -> Self {
        let index: HashMap<SubsetMask, usize> =
            elements.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut lower = Vec::with_capacity(elements.len());
        for (i, &p) in elements.iter().enumerate() {
            // Candidates strictly below p, largest first. A candidate is a
            // lower neighbor iff no accepted neighbor already contains it.
            let mut accepted: Vec<usize> = Vec::new();
            for j in (0..i).rev() {
                let q = elements[j];
                if q.is_proper_subset(p) && !accepted.iter().any(|&a| q.is_subset(elements[a])) {
                    accepted.push(j);
                }
            }
            accepted.reverse();
            lower.push(accepted);
        }
        CoverLattice { n, elements, lower, index }
    }

    /// Ground-set size.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements in `≺` order; index 0 is `∅`, the last index is `[n]`.
    pub fn elements(&self) -> &[SubsetMask] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> SubsetMask {
        self.elements[i]
    }

    pub fn bottom(&self) -> SubsetMask {
        SubsetMask::empty(self.n)
    }

    pub fn top(&self) -> SubsetMask {
        SubsetMask::full(self.n)
    }

    pub fn contains(&self, p: SubsetMask) -> bool {
        self.index.contains_key(&p)
    }

    pub fn index_of(&self, p: SubsetMask) -> Result<usize, LatticeError> {
        self.index.get(&p).copied().ok_or(LatticeError::NotAnElement(p))
    }

    /// Indices of the lower neighbors of element `i`, in `≺` order.
    pub fn lower_indices(&self, i: usize) -> &[usize] {
        &self.lower[i]
    }

    /// `N(p)`, in `≺` order. Empty exactly for `p = ∅`.
    pub fn lower_neighbors(&self, p: SubsetMask) -> Result<Vec<SubsetMask>, LatticeError> {
        let i = self.index_of(p)?;
        Ok(self.lower[i].iter().map(|&j| self.elements[j]).collect())
    }

    /// Largest `|N(p)|` over the lattice.
    pub fn max_lower_degree(&self) -> usize {
        self.lower.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `∧N(p)` for element `i`, with the empty meet read as `p` itself.
    pub fn neighbor_meet(&self, i: usize) -> SubsetMask {
        let p = self.elements[i];
        meet_of(self.lower[i].iter().map(|&j| self.elements[j]), p)
    }

    /// `f(p) = |p| - |N(p)| - |∧N(p)|`, defined for `p ≠ ∅`.
    pub fn f_value(&self, p: SubsetMask) -> Result<i64, LatticeError> {
        let i = self.index_of(p)?;
        if p.is_empty() {
            return Err(LatticeError::BottomElement);
        }
        Ok(self.f_at(i))
    }

    pub(crate) fn f_at(&self, i: usize) -> i64 {
        let p = self.elements[i];
        p.len() as i64 - self.lower[i].len() as i64 - self.neighbor_meet(i).len() as i64
    }

    /// Every Boolean interval of the lattice, as the image of `(p, S) ↦ [∧S, p]`
    /// for `S ⊆ N(p)`. Intervals come out grouped by `p` in `≺` order, with
    /// the subsets `S` in binary-counter order over `N(p)`.
    pub fn boolean_intervals(&self) -> Vec<(BasisLabel, BooleanInterval)> {
        let mut out = Vec::new();
        for (i, &p) in self.elements.iter().enumerate() {
            let nbrs: Vec<SubsetMask> = self.lower[i].iter().map(|&j| self.elements[j]).collect();
            for chosen in 0u64..(1u64 << nbrs.len()) {
                let s: Vec<SubsetMask> = nbrs
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| chosen & (1 << k) != 0)
                    .map(|(_, &q)| q)
                    .collect();
                let bottom = meet_of(s.iter().copied(), p);
                let rank = s.len();
                out.push((BasisLabel { p, s }, BooleanInterval { bottom, top: p, rank }));
            }
        }
        out
    }

    /// Finds the Boolean intervals by inspecting every interval `[a, b]` of
    /// the lattice directly, without going through lower neighbors of `b`.
    /// Used to cross-check [`CoverLattice::boolean_intervals`].
    pub fn boolean_intervals_scan(&self) -> BTreeSet<BooleanInterval> {
        let mut found = BTreeSet::new();
        for &a in &self.elements {
            for &b in &self.elements {
                if !a.is_subset(b) {
                    continue;
                }
                let inside: Vec<SubsetMask> = self
                    .elements
                    .iter()
                    .copied()
                    .filter(|&x| a.is_subset(x) && x.is_subset(b))
                    .collect();
                let above: Vec<SubsetMask> = inside.iter().copied().filter(|&x| x != a).collect();
                let atoms: Vec<SubsetMask> = above
                    .iter()
                    .copied()
                    .filter(|&x| !above.iter().any(|&y| y.is_proper_subset(x)))
                    .collect();
                let k = atoms.len();
                if k > 24 || inside.len() != 1usize << k {
                    continue;
                }
                let joins: HashSet<SubsetMask> = (0u32..(1u32 << k))
                    .map(|chosen| {
                        atoms
                            .iter()
                            .enumerate()
                            .filter(|(t, _)| chosen & (1 << t) != 0)
                            .fold(a, |acc, (_, &x)| acc.union(x))
                    })
                    .collect();
                if joins.len() == inside.len() && inside.iter().all(|x| joins.contains(x)) {
                    found.insert(BooleanInterval { bottom: a, top: b, rank: k });
                }
            }
        }
        found
    }

    /// The interval `[∧N(p), p]` attached to element `i`.
    pub fn top_interval(&self, i: usize) -> BooleanInterval {
        BooleanInterval {
            bottom: self.neighbor_meet(i),
            top: self.elements[i],
            rank: self.lower[i].len(),
        }
    }

    /// Indices of `A_G`: elements whose interval `[∧N(p), p]` is maximal under
    /// containment among all Boolean intervals.
    pub fn a_indices(&self) -> Vec<usize> {
        let intervals: Vec<BooleanInterval> = (0..self.len()).map(|i| self.top_interval(i)).collect();
        (0..self.len())
            .filter(|&i| {
                let mine = intervals[i];
                !intervals
                    .iter()
                    .enumerate()
                    .any(|(j, other)| j != i && interval_within(mine, *other))
            })
            .collect()
    }

    /// `A_G` in `≺` order.
    pub fn a_set(&self) -> Vec<SubsetMask> {
        self.a_indices().into_iter().map(|i| self.elements[i]).collect()
    }

    /// `max f` over `A_G`.
    pub fn max_f_on_a(&self) -> i64 {
        self.a_indices()
            .into_iter()
            .map(|i| self.f_at(i))
            .max()
            .expect("A_G is nonempty for n >= 1")
    }

    /// `B_G`: the elements of `A_G` where `f` attains its maximum over `A_G`.
    pub fn b_set(&self) -> Vec<SubsetMask> {
        let a = self.a_indices();
        let best = a.iter().map(|&i| self.f_at(i)).max();
        a.into_iter()
            .filter(|&i| Some(self.f_at(i)) == best)
            .map(|i| self.elements[i])
            .collect()
    }
}

/// `[a.bottom, a.top] ⊆ [b.bottom, b.top]` as sets of lattice elements.
pub fn interval_within(a: BooleanInterval, b: BooleanInterval) -> bool {
    b.bottom.is_subset(a.bottom) && a.top.is_subset(b.top)
}

/// Intersection of `family`; the empty meet is `context`.
pub fn meet_of<I: IntoIterator<Item = SubsetMask>>(family: I, context: SubsetMask) -> SubsetMask {
    let mut iter = family.into_iter();
    match iter.next() {
        None => context,
        Some(first) => iter.fold(first, SubsetMask::intersection),
    }
}

/// Closure of `seeds ∪ {∅, [n]}` under union and intersection.
pub fn lattice_closure<I>(n: usize, seeds: I) -> Result<CoverLattice, LatticeError>
where
    I: IntoIterator<Item = SubsetMask>,
{
    if n > MAX_GROUND {
        return Err(LatticeError::GroundTooLarge(n));
    }
    let mut members: BTreeSet<SubsetMask> = BTreeSet::new();
    members.insert(SubsetMask::empty(n));
    members.insert(SubsetMask::full(n));
    for s in seeds {
        if s.ground() != n {
            return Err(LatticeError::WrongGround(s, n));
        }
        members.insert(s);
    }
    let mut frontier: Vec<SubsetMask> = members.iter().copied().collect();
    while !frontier.is_empty() {
        let snapshot: Vec<SubsetMask> = members.iter().copied().collect();
        let mut next = Vec::new();
        for &a in &frontier {
            for &b in &snapshot {
                for c in [a.union(b), a.intersection(b)] {
                    if members.insert(c) {
                        next.push(c);
                    }
                }
            }
        }
        frontier = next;
    }
    CoverLattice::validate(members, n)
}

/// The sublattice generated by `seed_count` uniformly random subsets of `[n]`
/// together with `∅` and `[n]`. Deterministic in `rng_seed`.
pub fn random_sublattice(
    n: usize,
    seed_count: usize,
    rng_seed: u64,
) -> Result<CoverLattice, LatticeError> {
    if n > MAX_GROUND {
        return Err(LatticeError::GroundTooLarge(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let full = SubsetMask::full(n).bits();
    let seeds: Vec<SubsetMask> = (0..seed_count)
        .map(|_| SubsetMask::from_bits(rng.gen::<u32>() & full, n).expect("masked to n bits"))
        .collect();
    lattice_closure(n, seeds)
}
