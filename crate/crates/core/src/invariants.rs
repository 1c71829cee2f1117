//! Homological invariants of `R/I(G)` and `H_{L_G}` read off the lattice.
//!
//! Everything here is closed-form in terms of `N(p)`, `∧N(p)`, `f` and the
//! sets `A_G`, `B_G`; nothing is computed from a resolution. The oracle
//! module gives independent values to compare against.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::betti::{serialize_graded, BettiTable};
use crate::ideal::{alexander_dual, IdealError, Monomial, MonomialIdeal};
use crate::lattice::CoverLattice;
use crate::mask::SubsetMask;
use crate::resolution::BasisElement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("not Cohen-Macaulay: depth {depth} differs from dimension {dim}")]
    NotCM { depth: i64, dim: i64 },
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

/// `depth R/I(G) = n - max_{p ∈ A_G} f(p)`.
pub fn depth_edge_ring(lattice: &CoverLattice) -> i64 {
    lattice.n() as i64 - lattice.max_f_on_a()
}

/// `reg R/I(G) = max_p |N(p)|`.
pub fn regularity_edge_ring(lattice: &CoverLattice) -> usize {
    lattice.max_lower_degree()
}

/// `(pd R/I(G), pd H_{L_G})`. The first also equals `reg H_{L_G}`.
pub fn pd_and_reg_h(lattice: &CoverLattice) -> (i64, usize) {
    (lattice.n() as i64 + lattice.max_f_on_a(), lattice.max_lower_degree())
}

fn top_basis_element(lattice: &CoverLattice, i: usize) -> BasisElement {
    let p = lattice.element(i);
    let s = lattice.lower_indices(i).iter().map(|&k| lattice.element(k)).collect();
    BasisElement::new(p, s)
}

/// Extremal multigraded positions of `H_{L_G}`: `(|N(p)|, deg b(p; N(p)))`
/// for `p ∈ A_G`, each with Betti number 1.
pub fn extremal_multigraded_h(lattice: &CoverLattice) -> Vec<(usize, Monomial)> {
    lattice
        .a_indices()
        .into_iter()
        .map(|i| {
            let g = top_basis_element(lattice, i);
            (g.hom_degree(), g.multidegree)
        })
        .collect()
}

/// The same positions moved to `R/I(G)` by duality: `(|b| - |N(p)|, b, 1)`.
pub fn extremal_multigraded_edge_ring(lattice: &CoverLattice) -> Vec<(usize, Monomial, u64)> {
    extremal_multigraded_h(lattice)
        .into_iter()
        .map(|(i, b)| (b.degree() - i, b, 1))
        .collect()
}

/// Graded extremal positions `(i, i + j)` of `R/I(G)` with `i = n + f(p)`
/// and `j = |N(p)|`, for `p ∈ A_G` such that
/// (a) every `q ∈ A_G` with `|N(q)| > |N(p)|` has `f(q) < f(p)`, and
/// (b) every `q ∈ A_G` with `|N(q)| = |N(p)|` has
///     `|q| - |∧N(q)| <= |p| - |∧N(p)|`.
///
/// The value at a position is the number of such `p` landing there.
pub fn extremal_graded_edge_ring(lattice: &CoverLattice) -> BTreeMap<(usize, usize), u64> {
    let n = lattice.n() as i64;
    let a = lattice.a_indices();
    let deg = |i: usize| lattice.lower_indices(i).len();
    let span = |i: usize| lattice.element(i).len() as i64 - lattice.neighbor_meet(i).len() as i64;
    let mut out = BTreeMap::new();
    for &p in &a {
        let fp = lattice.f_at(p);
        let cond_a = a.iter().all(|&q| deg(q) <= deg(p) || lattice.f_at(q) < fp);
        let cond_b = a.iter().all(|&q| deg(q) != deg(p) || span(q) <= span(p));
        if cond_a && cond_b {
            let i = (n + fp) as usize;
            *out.entry((i, i + deg(p))).or_insert(0) += 1;
        }
    }
    out
}

/// `|B_G|`, a lower bound for the last total Betti number of `R/I(G)`.
pub fn last_betti_lower_bound(lattice: &CoverLattice) -> usize {
    lattice.b_set().len()
}

/// `depth R/I(G) = n`, i.e. `f` vanishes on `A_G`.
pub fn is_cohen_macaulay(lattice: &CoverLattice) -> bool {
    lattice.max_f_on_a() == 0
}

/// For a Cohen–Macaulay quotient `R/I`, checks that every multigraded
/// extremal position of the table sits in homological degree `pd(R/I)`.
///
/// `table` may be either the ideal or the quotient table. The dimension is
/// `2n` minus the least degree of a generator of the Alexander dual.
pub fn cm_extremal_placement_check(ideal: &MonomialIdeal, table: &BettiTable) -> Result<bool, InvariantError> {
    let q = table.to_quotient();
    let vars = 2 * ideal.n() as i64;
    let pd = q.pd().unwrap_or(0);
    let depth = vars - pd as i64;
    let height = alexander_dual(ideal)?.min_degree().unwrap_or(0) as i64;
    let dim = vars - height;
    if depth != dim {
        return Err(InvariantError::NotCM { depth, dim });
    }
    Ok(q.extremal_multigraded().iter().all(|&(i, _, _)| i == pd))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExtremalH {
    pub i: usize,
    pub deg: Monomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExtremalEntry {
    pub i: usize,
    pub deg: Monomial,
    pub value: u64,
}

/// Every closed-form invariant of one lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub n: usize,
    #[serde(rename = "depth_RI")]
    pub depth_ri: i64,
    #[serde(rename = "reg_RI")]
    pub reg_ri: usize,
    #[serde(rename = "pd_RI")]
    pub pd_ri: i64,
    #[serde(rename = "reg_H")]
    pub reg_h: i64,
    #[serde(rename = "pd_H")]
    pub pd_h: usize,
    pub a_set: Vec<SubsetMask>,
    pub b_set: Vec<SubsetMask>,
    #[serde(rename = "extremal_H")]
    pub extremal_h: Vec<ExtremalH>,
    #[serde(rename = "extremal_RI_multigraded")]
    pub extremal_ri_multigraded: Vec<ExtremalEntry>,
    #[serde(rename = "extremal_RI_graded", serialize_with = "serialize_graded")]
    pub extremal_ri_graded: BTreeMap<(usize, usize), u64>,
    pub last_betti_lower_bound: usize,
    pub is_cm: bool,
}

impl InvariantReport {
    pub fn from_lattice(lattice: &CoverLattice) -> Self {
        let (pd_ri, pd_h) = pd_and_reg_h(lattice);
        InvariantReport {
            n: lattice.n(),
            depth_ri: depth_edge_ring(lattice),
            reg_ri: regularity_edge_ring(lattice),
            pd_ri,
            reg_h: pd_ri,
            pd_h,
            a_set: lattice.a_set(),
            b_set: lattice.b_set(),
            extremal_h: extremal_multigraded_h(lattice)
                .into_iter()
                .map(|(i, deg)| ExtremalH { i, deg })
                .collect(),
            extremal_ri_multigraded: extremal_multigraded_edge_ring(lattice)
                .into_iter()
                .map(|(i, deg, value)| ExtremalEntry { i, deg, value })
                .collect(),
            extremal_ri_graded: extremal_graded_edge_ring(lattice),
            last_betti_lower_bound: last_betti_lower_bound(lattice),
            is_cm: is_cohen_macaulay(lattice),
        }
    }

    /// Plain-text summary. With a table of `R/I(G)`, its Betti diagram is
    /// appended with the predicted graded extremal corners marked `*`.
    pub fn render_text(&self, table: Option<&BettiTable>) -> String {
        let list = |v: &[SubsetMask]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ");
        let mut out = String::new();
        let _ = writeln!(out, "n: {}", self.n);
        let _ = writeln!(out, "depth R/I: {}", self.depth_ri);
        let _ = writeln!(out, "reg R/I: {}", self.reg_ri);
        let _ = writeln!(out, "pd R/I: {}", self.pd_ri);
        let _ = writeln!(out, "reg H: {}", self.reg_h);
        let _ = writeln!(out, "pd H: {}", self.pd_h);
        let _ = writeln!(out, "cohen-macaulay: {}", if self.is_cm { "yes" } else { "no" });
        let _ = writeln!(out, "A_G: {}", list(&self.a_set));
        let _ = writeln!(out, "B_G: {}", list(&self.b_set));
        let _ = writeln!(out, "last betti >= {}", self.last_betti_lower_bound);
        out.push_str("extremal H:\n");
        for e in &self.extremal_h {
            let _ = writeln!(out, "  beta_{},{} = 1", e.i, e.deg);
        }
        out.push_str("extremal R/I (multigraded):\n");
        for e in &self.extremal_ri_multigraded {
            let _ = writeln!(out, "  beta_{},{} = {}", e.i, e.deg, e.value);
        }
        out.push_str("extremal R/I (graded):\n");
        for (&(i, j), v) in &self.extremal_ri_graded {
            let _ = writeln!(out, "  beta_{i},{j} = {v}");
        }
        if let Some(t) = table {
            let marks: BTreeSet<(usize, usize)> = self.extremal_ri_graded.keys().copied().collect();
            out.push('\n');
            out.push_str(&t.to_quotient().render_diagram_marked(&marks));
        }
        out
    }
}
