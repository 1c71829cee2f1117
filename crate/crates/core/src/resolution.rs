//! The minimal multigraded free resolution of the Hibi ideal `H_L`.
//!
//! Basis elements are `b(p; S)` for `p ∈ L` and `S ⊆ N(p)`, sitting in
//! homological degree `|S|` with multidegree `X_p Y_{[n] \ ∧S}` (and
//! `∧∅ = p`, so `b(p; ∅)` maps to `u_p`). The differential is
//!
//! ```text
//! ∂ b(p; S) = Σ_{q ∈ S} (-1)^{σ(q;S)} ( Y_{S_q} b(p; S \ q) - X_{p \ q} b(q; q ∧ (S \ q)) )
//! ```
//!
//! where `σ(q; S)` counts the members of `S` before `q` in the lattice order,
//! `S_q = ∧(S \ q) \ q` and `q ∧ T = {q ∩ r : r ∈ T}`.
//!
//! The checks in this module work on any [`FreeComplex`] of squarefree
//! multidegrees, which also covers the Taylor complex built by the oracle.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::betti::{BettiTable, Subject};
use crate::ideal::{Monomial, MonomialIdeal};
use crate::lattice::{meet_of, BasisLabel, CoverLattice};
use crate::linalg::{Field, SparseMatrix};
use crate::mask::SubsetMask;

/// Default cap on `|N(p)|`.
pub const DEFAULT_NEIGHBOR_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolutionError {
    #[error("{p} has {count} lower neighbors, above the cap of {cap}")]
    TooManyNeighbors { p: SubsetMask, count: usize, cap: usize },
    #[error("homological degree 0 has no differential; use the augmentation")]
    HomDegreeZero,
    #[error("basis element b({p}; {s:?}) is not in the resolution")]
    UnknownBasisElement { p: SubsetMask, s: Vec<SubsetMask> },
    #[error("two terms of the differential of b({0}; ..) share a target")]
    CollidingTargets(SubsetMask),
}

/// `b(p; S)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct BasisElement {
    pub p: SubsetMask,
    #[serde(rename = "S")]
    pub s: Vec<SubsetMask>,
    #[serde(rename = "multideg")]
    pub multidegree: Monomial,
}

impl BasisElement {
    /// `b(p; S)` with its multidegree; `s` must already be in lattice order.
    pub fn new(p: SubsetMask, s: Vec<SubsetMask>) -> Self {
        let meet = meet_of(s.iter().copied(), p);
        BasisElement { p, multidegree: Monomial::new(p, meet.complement()), s }
    }

    pub fn hom_degree(&self) -> usize {
        self.s.len()
    }

    pub fn label(&self) -> BasisLabel {
        BasisLabel { p: self.p, s: self.s.clone() }
    }
}

/// One nonzero matrix entry: `source` (an index into level `i`) maps to
/// `sign · monomial · target` (an index into level `i - 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Term {
    pub source: usize,
    pub target: usize,
    pub sign: i64,
    pub monomial: Monomial,
}

/// A complex of free multigraded modules over `K[x_1..x_n, y_1..y_n]`
/// together with an augmentation onto a monomial ideal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreeComplex {
    pub n: usize,
    /// Multidegrees of the basis of each level.
    pub multidegrees: Vec<Vec<Monomial>>,
    /// `diffs[i - 1]` holds the entries of `∂_i : F_i → F_{i-1}`.
    pub diffs: Vec<Vec<Term>>,
    /// Image of each level-0 basis element in the ideal.
    pub augmentation: Vec<Monomial>,
}

/// Why a complex failed [`verify_complex`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ComplexViolation {
    /// An entry whose coefficient does not carry the source's multidegree
    /// onto the target's.
    NotHomogeneous { level: usize, source: usize, target: usize },
    /// `∂_{level-1} ∘ ∂_level` is nonzero from `source` to `target`.
    SquareNonzero { level: usize, source: usize, target: usize },
    /// `ε ∘ ∂_1` is nonzero on `source`.
    AugmentationNonzero { source: usize },
}

impl FreeComplex {
    pub fn level_ranks(&self) -> Vec<usize> {
        self.multidegrees.iter().map(Vec::len).collect()
    }

    /// Flips the sign of one differential entry; for mutation tests.
    pub fn negate_term(&mut self, level: usize, index: usize) {
        self.diffs[level - 1][index].sign *= -1;
    }
}

/// Checks homogeneity, `∂ ∘ ∂ = 0` and `ε ∘ ∂_1 = 0` with exact monomial
/// arithmetic. Returns the first violation found.
pub fn verify_complex(c: &FreeComplex) -> Result<(), ComplexViolation> {
    for (k, terms) in c.diffs.iter().enumerate() {
        let level = k + 1;
        for t in terms {
            let src = c.multidegrees[level][t.source];
            let tgt = c.multidegrees[level - 1][t.target];
            if tgt.product(&t.monomial) != Some(src) {
                return Err(ComplexViolation::NotHomogeneous { level, source: t.source, target: t.target });
            }
        }
    }
    if let Some(first) = c.diffs.first() {
        let mut acc: BTreeMap<(usize, Monomial), i64> = BTreeMap::new();
        for t in first {
            let image = c.augmentation[t.target].product(&t.monomial);
            let image = image.unwrap_or_else(|| c.augmentation[t.target].lcm(&t.monomial));
            *acc.entry((t.source, image)).or_insert(0) += t.sign;
        }
        if let Some((&(source, _), _)) = acc.iter().find(|(_, &v)| v != 0) {
            return Err(ComplexViolation::AugmentationNonzero { source });
        }
    }
    for level in 2..=c.diffs.len() {
        let upper = &c.diffs[level - 1];
        let lower = &c.diffs[level - 2];
        let mut by_source: HashMap<usize, Vec<&Term>> = HashMap::new();
        for t in lower {
            by_source.entry(t.source).or_default().push(t);
        }
        let mut acc: BTreeMap<(usize, usize, Monomial), i64> = BTreeMap::new();
        for a in upper {
            for b in by_source.get(&a.target).into_iter().flatten() {
                let coeff = a.monomial.lcm(&b.monomial);
                *acc.entry((a.source, b.target, coeff)).or_insert(0) += a.sign * b.sign;
            }
        }
        if let Some((&(source, target, _), _)) = acc.iter().find(|(_, &v)| v != 0) {
            return Err(ComplexViolation::SquareNonzero { level, source, target });
        }
    }
    Ok(())
}

/// The first differential entry with a constant coefficient, as `(level, term)`.
pub fn find_unit_entry(c: &FreeComplex) -> Option<(usize, Term)> {
    c.diffs
        .iter()
        .enumerate()
        .find_map(|(k, terms)| terms.iter().find(|t| t.monomial.is_one()).map(|t| (k + 1, *t)))
}

/// No differential entry is a nonzero constant.
pub fn verify_minimality(c: &FreeComplex) -> bool {
    find_unit_entry(c).is_none()
}

/// Exactness of the degree-`b` strand `… → (F_1)_b → (F_0)_b → I_b → 0`
/// over the rationals.
pub fn strand_exactness(c: &FreeComplex, ideal: &MonomialIdeal, b: &Monomial) -> bool {
    strand_exactness_over(c, ideal, b, Field::Rational)
}

pub fn strand_exactness_over(c: &FreeComplex, ideal: &MonomialIdeal, b: &Monomial, field: Field) -> bool {
    // survivors[i][k] = position of basis element k of level i in the strand
    let survivors: Vec<Vec<Option<usize>>> = c
        .multidegrees
        .iter()
        .map(|level| {
            let mut next = 0;
            level
                .iter()
                .map(|m| {
                    m.divides(b).then(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        })
        .collect();
    let dims: Vec<usize> = survivors.iter().map(|s| s.iter().flatten().count()).collect();
    let ideal_dim = usize::from(ideal.contains(b));

    // rank of the map leaving level i (i = 0 is the augmentation)
    let mut out_rank = vec![0usize; dims.len() + 1];
    let mut aug = SparseMatrix::new(dims.first().copied().unwrap_or(0), ideal_dim);
    if ideal_dim == 1 {
        for k in survivors.first().into_iter().flatten().flatten() {
            aug.add(*k, 0, 1);
        }
    }
    out_rank[0] = aug.rank(field);
    for (k, terms) in c.diffs.iter().enumerate() {
        let level = k + 1;
        let mut m = SparseMatrix::new(dims[level], dims[level - 1]);
        for t in terms {
            if let (Some(r), Some(col)) = (survivors[level][t.source], survivors[level - 1][t.target]) {
                m.add(r, col, t.sign);
            }
        }
        out_rank[level] = m.rank(field);
    }
    if out_rank[0] != ideal_dim {
        return false;
    }
    (0..dims.len()).all(|i| dims[i] == out_rank[i] + out_rank[i + 1])
}

/// The explicit resolution of `H_L`: labelled basis plus the complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionComplex {
    pub levels: Vec<Vec<BasisElement>>,
    pub complex: FreeComplex,
}

impl ResolutionComplex {
    pub fn level_ranks(&self) -> Vec<usize> {
        self.complex.level_ranks()
    }
}

impl Serialize for ResolutionComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Doc<'a> {
            n: usize,
            levels: &'a [Vec<BasisElement>],
            differentials: &'a [Vec<Term>],
        }
        Doc { n: self.complex.n, levels: &self.levels, differentials: &self.complex.diffs }.serialize(s)
    }
}

/// Lexicographic `size`-subsets of `0..k`.
fn combinations(k: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..size).collect();
    if size > k {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(pos) = (0..size).rev().find(|&t| cur[t] < k - size + t) else { break };
        cur[pos] += 1;
        for t in pos + 1..size {
            cur[t] = cur[t - 1] + 1;
        }
    }
    out
}

/// All `b(p; S)` grouped by `|S|`, with the default neighbor cap.
pub fn resolution_basis(lattice: &CoverLattice) -> Result<Vec<Vec<BasisElement>>, ResolutionError> {
    resolution_basis_capped(lattice, DEFAULT_NEIGHBOR_CAP)
}

/// Level `i` lists `b(p; S)` with `|S| = i`, ordered by `p` and then by `S`
/// lexicographically in the order of `N(p)`.
pub fn resolution_basis_capped(
    lattice: &CoverLattice,
    cap: usize,
) -> Result<Vec<Vec<BasisElement>>, ResolutionError> {
    for (i, &p) in lattice.elements().iter().enumerate() {
        let count = lattice.lower_indices(i).len();
        if count > cap {
            return Err(ResolutionError::TooManyNeighbors { p, count, cap });
        }
    }
    let top = lattice.max_lower_degree();
    let mut levels: Vec<Vec<BasisElement>> = vec![Vec::new(); top + 1];
    for (size, level) in levels.iter_mut().enumerate() {
        for (i, &p) in lattice.elements().iter().enumerate() {
            let nbrs = lattice.lower_indices(i);
            for combo in combinations(nbrs.len(), size) {
                let s = combo.iter().map(|&k| lattice.element(nbrs[k])).collect();
                level.push(BasisElement::new(p, s));
            }
        }
    }
    Ok(levels)
}

/// `∂ b(p; S)` as `(target, sign, coefficient)` terms.
pub fn differential(
    lattice: &CoverLattice,
    g: &BasisElement,
) -> Result<Vec<(BasisElement, i64, Monomial)>, ResolutionError> {
    if g.s.is_empty() {
        return Err(ResolutionError::HomDegreeZero);
    }
    let n = lattice.n();
    let unknown = || ResolutionError::UnknownBasisElement { p: g.p, s: g.s.clone() };
    let pi = lattice.index_of(g.p).map_err(|_| unknown())?;
    let nbrs = lattice.lower_indices(pi);
    if !g.s.iter().all(|q| nbrs.iter().any(|&k| lattice.element(k) == *q))
        || !g.s.windows(2).all(|w| w[0] < w[1])
    {
        return Err(unknown());
    }
    let mut terms: Vec<(BasisElement, i64, Monomial)> = Vec::with_capacity(2 * g.s.len());
    for (sigma, &q) in g.s.iter().enumerate() {
        let sign = if sigma % 2 == 0 { 1 } else { -1 };
        let rest: Vec<SubsetMask> = g.s.iter().copied().filter(|&r| r != q).collect();

        let y_part = meet_of(rest.iter().copied(), g.p).difference(q);
        let same_top = BasisElement::new(g.p, rest.clone());
        terms.push((same_top, sign, Monomial::new(SubsetMask::empty(n), y_part)));

        // r ↦ q ∩ r preserves the lattice order on N(p), so this stays sorted.
        let restricted: Vec<SubsetMask> = rest.iter().map(|&r| q.intersection(r)).collect();
        debug_assert!(restricted.windows(2).all(|w| w[0] < w[1]));
        let qi = lattice.index_of(q).map_err(|_| unknown())?;
        let q_nbrs = lattice.lower_indices(qi);
        if !restricted.iter().all(|t| q_nbrs.iter().any(|&k| lattice.element(k) == *t)) {
            return Err(ResolutionError::UnknownBasisElement { p: q, s: restricted });
        }
        let dropped = BasisElement::new(q, restricted);
        terms.push((dropped, -sign, Monomial::new(g.p.difference(q), SubsetMask::empty(n))));
    }
    for (a, t) in terms.iter().enumerate() {
        if terms[a + 1..].iter().any(|u| u.0.label() == t.0.label()) {
            return Err(ResolutionError::CollidingTargets(g.p));
        }
    }
    Ok(terms)
}

/// Builds the full resolution of `H_L`.
pub fn build_resolution(lattice: &CoverLattice) -> Result<ResolutionComplex, ResolutionError> {
    let levels = resolution_basis(lattice)?;
    let index: Vec<HashMap<BasisLabel, usize>> = levels
        .iter()
        .map(|level| level.iter().enumerate().map(|(k, g)| (g.label(), k)).collect())
        .collect();
    let mut diffs = Vec::new();
    for level in 1..levels.len() {
        let mut terms = Vec::new();
        for (src, g) in levels[level].iter().enumerate() {
            for (target, sign, monomial) in differential(lattice, g)? {
                let t = *index[level - 1].get(&target.label()).ok_or_else(|| {
                    ResolutionError::UnknownBasisElement { p: target.p, s: target.s.clone() }
                })?;
                terms.push(Term { source: src, target: t, sign, monomial });
            }
        }
        diffs.push(terms);
    }
    let complex = FreeComplex {
        n: lattice.n(),
        multidegrees: levels.iter().map(|l| l.iter().map(|g| g.multidegree).collect()).collect(),
        diffs,
        augmentation: levels[0].iter().map(|g| Monomial::hibi_generator(g.p)).collect(),
    };
    Ok(ResolutionComplex { levels, complex })
}

/// `β_{i,b}(H_L)` counted from the basis (valid because the resolution is
/// minimal).
pub fn betti_table_from_basis(lattice: &CoverLattice) -> Result<BettiTable, ResolutionError> {
    let levels = resolution_basis(lattice)?;
    let mut t = BettiTable::new(lattice.n(), Subject::Ideal);
    for (i, level) in levels.iter().enumerate() {
        for g in level {
            t.add(i, g.multidegree, 1);
        }
    }
    Ok(t)
}

/// `rank F_i = Σ_p C(|N(p)|, i)`.
pub fn expected_level_ranks(lattice: &CoverLattice) -> Vec<usize> {
    let top = lattice.max_lower_degree();
    (0..=top)
        .map(|i| {
            (0..lattice.len())
                .map(|k| binomial(lattice.lower_indices(k).len(), i))
                .sum()
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, t| acc * (n - t) / (t + 1))
}
