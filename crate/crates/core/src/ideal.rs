//! Squarefree monomials and monomial ideals in `K[x_1..x_n, y_1..y_n]`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::BipartiteGraph;
use crate::lattice::CoverLattice;
use crate::mask::SubsetMask;

/// Default cap on the number of generators fed to [`alexander_dual`].
pub const DEFAULT_GENERATOR_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("the zero ideal has no Alexander dual")]
    ZeroIdeal,
    #[error("{count} generators exceed the cap of {cap}")]
    TooManyGenerators { count: usize, cap: usize },
    #[error("monomial lives in {found} variable pairs, expected {expected}")]
    WrongArity { expected: usize, found: usize },
}

/// A squarefree monomial `X_xs · Y_ys`. Also used as a multidegree.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub x: SubsetMask,
    pub y: SubsetMask,
}

impl Monomial {
    pub fn new(x: SubsetMask, y: SubsetMask) -> Self {
        debug_assert_eq!(x.ground(), y.ground());
        Monomial { x, y }
    }

    pub fn one(n: usize) -> Self {
        Monomial::new(SubsetMask::empty(n), SubsetMask::empty(n))
    }

    /// `x_1 ⋯ x_n y_1 ⋯ y_n`.
    pub fn all_variables(n: usize) -> Self {
        Monomial::new(SubsetMask::full(n), SubsetMask::full(n))
    }

    /// `u_p = X_p Y_{[n] \ p}`.
    pub fn hibi_generator(p: SubsetMask) -> Self {
        Monomial::new(p, p.complement())
    }

    pub fn n(&self) -> usize {
        self.x.ground()
    }

    pub fn degree(&self) -> usize {
        self.x.len() + self.y.len()
    }

    pub fn is_one(&self) -> bool {
        self.x.is_empty() && self.y.is_empty()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.x.is_subset(other.x) && self.y.is_subset(other.y)
    }

    /// `self` divides `other` and differs from it.
    pub fn strictly_divides(&self, other: &Monomial) -> bool {
        self.divides(other) && self != other
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.x.union(other.x), self.y.union(other.y))
    }

    /// `self / other`, or `None` if `other` does not divide `self`.
    pub fn quotient(&self, other: &Monomial) -> Option<Monomial> {
        other
            .divides(self)
            .then(|| Monomial::new(self.x.difference(other.x), self.y.difference(other.y)))
    }

    /// The product of coprime squarefree monomials, `None` if they share a variable.
    pub fn product(&self, other: &Monomial) -> Option<Monomial> {
        let coprime = self.x.intersection(other.x).is_empty() && self.y.intersection(other.y).is_empty();
        coprime.then(|| self.lcm(other))
    }

    /// Variables packed into one word: `x_i` at bit `i`, `y_j` at bit `n + j`.
    pub fn support_bits(&self) -> u64 {
        self.x.bits() as u64 | ((self.y.bits() as u64) << self.n())
    }

    pub fn from_support_bits(bits: u64, n: usize) -> Monomial {
        let low = if n >= 32 { u32::MAX as u64 } else { (1u64 << n) - 1 };
        let x = SubsetMask::from_bits((bits & low) as u32, n).expect("x part in range");
        let y = SubsetMask::from_bits(((bits >> n) & low) as u32, n).expect("y part in range");
        Monomial::new(x, y)
    }

    /// Name of the `k`-th packed variable (`x1`, …, `yn`).
    pub fn variable_name(k: usize, n: usize) -> String {
        if k < n {
            format!("x{}", k + 1)
        } else {
            format!("y{}", k - n + 1)
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let names: Vec<String> = self
            .x
            .labels()
            .into_iter()
            .map(|i| format!("x{i}"))
            .chain(self.y.labels().into_iter().map(|j| format!("y{j}")))
            .collect();
        write!(f, "{}", names.join("*"))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Monomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MonomialDoc { x: self.x.labels(), y: self.y.labels() }.serialize(s)
    }
}

/// `{"x": [..], "y": [..]}` with 1-based labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialDoc {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
}

impl MonomialDoc {
    pub fn into_monomial(self, n: usize) -> Option<Monomial> {
        Some(Monomial::new(
            SubsetMask::from_labels(n, self.x)?,
            SubsetMask::from_labels(n, self.y)?,
        ))
    }
}

/// A squarefree monomial ideal given by its minimal generators, sorted by
/// degree and then by the `x` and `y` parts. No generators means the zero
/// ideal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    n: usize,
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    /// Minimalizes `gens` (drops any generator divisible by another).
    pub fn new<I: IntoIterator<Item = Monomial>>(n: usize, gens: I) -> Result<Self, IdealError> {
        let gens: Vec<Monomial> = gens.into_iter().collect();
        if let Some(g) = gens.iter().find(|g| g.n() != n) {
            return Err(IdealError::WrongArity { expected: n, found: g.n() });
        }
        Ok(MonomialIdeal { n, gens: minimalize(gens) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Ideal membership: some generator divides `m`.
    pub fn contains(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    /// Smallest generator degree; the height of the ideal when `self` is the
    /// Alexander dual of another squarefree ideal.
    pub fn min_degree(&self) -> Option<usize> {
        self.gens.iter().map(Monomial::degree).min()
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return write!(f, "(0)");
        }
        let parts: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn canonical_key(m: &Monomial) -> (usize, u32, u32) {
    (m.degree(), m.x.bits(), m.y.bits())
}

fn minimalize(gens: Vec<Monomial>) -> Vec<Monomial> {
    let mut unique: Vec<Monomial> = gens.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    unique.sort_by_key(canonical_key);
    let mut kept: Vec<Monomial> = Vec::with_capacity(unique.len());
    // Sorted by degree, so anything that could divide g is already decided.
    for g in unique {
        if !kept.iter().any(|k| k.divides(&g)) {
            kept.push(g);
        }
    }
    kept
}

/// `H_L`, generated by `u_p = X_p Y_{[n] \ p}` for `p ∈ L`.
pub fn hibi_ideal(lattice: &CoverLattice) -> MonomialIdeal {
    let gens = lattice.elements().iter().map(|&p| Monomial::hibi_generator(p));
    MonomialIdeal::new(lattice.n(), gens).expect("generators share the lattice's ground set")
}

/// `I(G)`, generated by `x_i y_j` over the edges of a normalized graph.
pub fn edge_ideal(g: &BipartiteGraph) -> MonomialIdeal {
    let n = g.n();
    let gens = g.edges().map(|(i, j)| {
        Monomial::new(
            SubsetMask::from_indices(n, [i]).expect("edge in range"),
            SubsetMask::from_indices(n, [j]).expect("edge in range"),
        )
    });
    MonomialIdeal::new(n, gens).expect("one ground set")
}

/// The Alexander dual, with the default generator cap.
pub fn alexander_dual(ideal: &MonomialIdeal) -> Result<MonomialIdeal, IdealError> {
    alexander_dual_capped(ideal, DEFAULT_GENERATOR_CAP)
}

/// The ideal generated by the minimal transversals of the generator supports.
///
/// Generators are folded in one at a time: transversals that already meet the
/// new support are kept, the others are extended by each of its variables,
/// and the result is minimalized.
pub fn alexander_dual_capped(ideal: &MonomialIdeal, cap: usize) -> Result<MonomialIdeal, IdealError> {
    if ideal.is_zero() {
        return Err(IdealError::ZeroIdeal);
    }
    if ideal.gens.len() > cap {
        return Err(IdealError::TooManyGenerators { count: ideal.gens.len(), cap });
    }
    let n = ideal.n;
    let mut transversals: Vec<u64> = vec![0];
    for g in &ideal.gens {
        let support = g.support_bits();
        let mut next: HashSet<u64> = HashSet::new();
        for &t in &transversals {
            if t & support != 0 {
                next.insert(t);
            } else {
                let mut rest = support;
                while rest != 0 {
                    let v = rest & rest.wrapping_neg();
                    next.insert(t | v);
                    rest &= rest - 1;
                }
            }
        }
        let mut sorted: Vec<u64> = next.into_iter().collect();
        sorted.sort_by_key(|t| (t.count_ones(), *t));
        let mut kept: Vec<u64> = Vec::new();
        for t in sorted {
            if !kept.iter().any(|&k| k & !t == 0) {
                kept.push(t);
            }
        }
        transversals = kept;
    }
    MonomialIdeal::new(n, transversals.into_iter().map(|t| Monomial::from_support_bits(t, n)))
}

/// All lcms of nonempty sets of generators, sorted by degree then support.
pub fn lcm_closure(ideal: &MonomialIdeal) -> Vec<Monomial> {
    let gens: Vec<u64> = ideal.gens.iter().map(Monomial::support_bits).collect();
    let mut seen: HashSet<u64> = gens.iter().copied().collect();
    let mut frontier: Vec<u64> = seen.iter().copied().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &a in &frontier {
            for &g in &gens {
                let c = a | g;
                if seen.insert(c) {
                    next.push(c);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<Monomial> = seen
        .into_iter()
        .map(|b| Monomial::from_support_bits(b, ideal.n))
        .collect();
    out.sort_by_key(canonical_key);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::graph_from_lattice;

    /// Parses `"x1*y2"` style monomials in `n` variable pairs.
    fn mono(n: usize, s: &str) -> Monomial {
        let mut m = Monomial::one(n);
        if s == "1" {
            return m;
        }
        for v in s.split('*') {
            let (kind, idx) = v.split_at(1);
            let i: usize = idx.parse().unwrap();
            match kind {
                "x" => m.x.insert(i - 1),
                "y" => m.y.insert(i - 1),
                _ => panic!("bad variable {v}"),
            }
        }
        m
    }

    fn ideal(n: usize, gens: &[&str]) -> MonomialIdeal {
        MonomialIdeal::new(n, gens.iter().map(|g| mono(n, g))).unwrap()
    }

    fn gen_set(i: &MonomialIdeal) -> BTreeSet<String> {
        i.gens().iter().map(|g| g.to_string()).collect()
    }

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn hibi_examples() {
        assert_eq!(gen_set(&hibi_ideal(&fixtures::e1())), set(&["y1", "x1"]));
        assert_eq!(gen_set(&hibi_ideal(&fixtures::chain())), set(&["y1*y2", "x1*y2", "x1*x2"]));
        assert_eq!(
            gen_set(&hibi_ideal(&fixtures::b2())),
            set(&["y1*y2", "x1*y2", "x2*y1", "x1*x2"])
        );
        for l in fixtures::all() {
            assert_eq!(hibi_ideal(&l).gens().len(), l.len());
        }
    }

    #[test]
    fn edge_examples() {
        assert_eq!(gen_set(&edge_ideal(&graph_from_lattice(&fixtures::e1()))), set(&["x1*y1"]));
        assert_eq!(
            gen_set(&edge_ideal(&graph_from_lattice(&fixtures::k22()))),
            set(&["x1*y1", "x1*y2", "x2*y1", "x2*y2"])
        );
        assert_eq!(
            gen_set(&edge_ideal(&graph_from_lattice(&fixtures::chain()))),
            set(&["x1*y1", "x1*y2", "x2*y2"])
        );
    }

    #[test]
    fn dual_examples() {
        assert_eq!(gen_set(&alexander_dual(&ideal(1, &["x1*y1"])).unwrap()), set(&["x1", "y1"]));
        assert_eq!(gen_set(&alexander_dual(&ideal(1, &["x1", "y1"])).unwrap()), set(&["x1*y1"]));
        let chain = fixtures::chain();
        assert_eq!(
            alexander_dual(&hibi_ideal(&chain)).unwrap(),
            edge_ideal(&graph_from_lattice(&chain))
        );
        assert_eq!(
            alexander_dual(&MonomialIdeal::new(1, []).unwrap()).unwrap_err(),
            IdealError::ZeroIdeal
        );
    }

    #[test]
    fn dual_generator_cap() {
        let i = ideal(2, &["x1", "x2", "y1"]);
        assert_eq!(
            alexander_dual_capped(&i, 2).unwrap_err(),
            IdealError::TooManyGenerators { count: 3, cap: 2 }
        );
    }

    #[test]
    fn minimalization() {
        let i = ideal(2, &["x1*y1", "x1", "x1*x2*y2", "y2", "y2"]);
        assert_eq!(i.gens(), &[mono(2, "y2"), mono(2, "x1")]);
    }

    #[test]
    fn lcm_closure_examples() {
        assert_eq!(lcm_closure(&ideal(1, &["x1*y1"])), vec![mono(1, "x1*y1")]);
        assert_eq!(
            lcm_closure(&ideal(1, &["x1", "y1"])),
            vec![mono(1, "y1"), mono(1, "x1"), mono(1, "x1*y1")]
        );
        let b2 = lcm_closure(&hibi_ideal(&fixtures::b2()));
        assert_eq!(b2.len(), 9);
        for s in ["x1*y1*y2", "x2*y1*y2", "x1*x2*y1", "x1*x2*y2", "x1*x2*y1*y2"] {
            assert!(b2.contains(&mono(2, s)), "{s} missing");
        }
    }

    #[test]
    fn rendering() {
        assert_eq!(mono(3, "x1*x2*y3").to_string(), "x1*x2*y3");
        assert_eq!(Monomial::one(2).to_string(), "1");
        assert_eq!(
            serde_json::to_string(&mono(2, "x2*y1")).unwrap(),
            r#"{"x":[2],"y":[1]}"#
        );
    }
}
