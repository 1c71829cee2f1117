//! Bipartite graphs, their minimal vertex covers and vertex-cover lattices.
//!
//! Vertices are `x_1..x_left` and `y_1..y_right`; an edge `(i, j)` joins
//! `x_i` and `y_j` (0-based internally, 1-based in files and output). A graph
//! is *normalized* when both sides have the same size `n` and `(i, i)` is an
//! edge for every `i`, i.e. the identity is a perfect matching.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::lattice::{CoverLattice, LatticeError};
use crate::mask::{SubsetMask, MAX_GROUND};

/// Default cap on `left + right` for exhaustive cover enumeration.
pub const DEFAULT_ENUMERATION_BOUND: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("the edge list is empty")]
    EmptyInput,
    #[error("no perfect matching exists ({left} left vertices, {right} right vertices)")]
    NoPerfectMatching { left: usize, right: usize },
    #[error("vertex {0} is isolated")]
    IsolatedVertex(String),
    #[error("edge ({0}, {1}) is out of range")]
    EdgeOutOfRange(usize, usize),
    #[error("a side has {0} vertices; at most {MAX_GROUND} are supported")]
    SideTooLarge(usize),
    #[error("{vertices} vertices exceed the enumeration bound of {bound}")]
    TooLarge { vertices: usize, bound: usize },
    #[error("graph is not normalized (sides must match and contain every edge (i, i))")]
    NotNormalized,
    #[error("graph is not unmixed")]
    NotUnmixed,
    #[error("cover lattice failed validation: {0}")]
    LatticeValidation(String),
}

/// Original vertex names, listed in normalized index order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexLabels {
    pub left: Vec<String>,
    pub right: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    edges: BTreeSet<(usize, usize)>,
    labels: Option<VertexLabels>,
}

/// A vertex cover, split into its `x` and `y` parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VertexCover {
    pub xs: SubsetMask,
    pub ys: SubsetMask,
}

impl VertexCover {
    pub fn len(&self) -> usize {
        self.xs.len() + self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl BipartiteGraph {
    /// Builds a graph from 0-based edges. Every vertex must lie on an edge.
    pub fn new<I>(left: usize, right: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        for side in [left, right] {
            if side > MAX_GROUND {
                return Err(GraphError::SideTooLarge(side));
            }
        }
        let edges: BTreeSet<(usize, usize)> = edges.into_iter().collect();
        if edges.is_empty() {
            return Err(GraphError::EmptyInput);
        }
        if let Some(&(i, j)) = edges.iter().find(|&&(i, j)| i >= left || j >= right) {
            return Err(GraphError::EdgeOutOfRange(i + 1, j + 1));
        }
        for i in 0..left {
            if !edges.iter().any(|&(a, _)| a == i) {
                return Err(GraphError::IsolatedVertex(format!("x{}", i + 1)));
            }
        }
        for j in 0..right {
            if !edges.iter().any(|&(_, b)| b == j) {
                return Err(GraphError::IsolatedVertex(format!("y{}", j + 1)));
            }
        }
        Ok(BipartiteGraph { left, right, edges, labels: None })
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    /// Number of matched pairs. Only meaningful for normalized graphs.
    pub fn n(&self) -> usize {
        self.left
    }

    /// 0-based edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i, j))
    }

    pub fn labels(&self) -> Option<&VertexLabels> {
        self.labels.as_ref()
    }

    pub fn is_normalized(&self) -> bool {
        self.left == self.right && (0..self.left).all(|i| self.edges.contains(&(i, i)))
    }

    /// Relabels the right side so that a perfect matching becomes the
    /// identity. Vertex names default to `x<i>` / `y<j>`.
    pub fn normalize(&self) -> Result<Self, GraphError> {
        let left: Vec<String> = (1..=self.left).map(|i| format!("x{i}")).collect();
        let right: Vec<String> = (1..=self.right).map(|j| format!("y{j}")).collect();
        normalize_indexed(&left, &right, &self.edges)
    }

    fn right_neighbors(&self) -> Vec<u32> {
        let mut adj = vec![0u32; self.left];
        for &(i, j) in &self.edges {
            adj[i] |= 1 << j;
        }
        adj
    }
}

/// Normalizes a graph given by named edges `(left label, right label)`.
///
/// Vertices are numbered by first appearance. A perfect matching is found by
/// augmenting paths (left vertices in order, neighbors by increasing index)
/// and the right side is relabeled so that the matching is `(i, i)`.
pub fn normalize_graph<S: AsRef<str>>(raw_edges: &[(S, S)]) -> Result<BipartiteGraph, GraphError> {
    if raw_edges.is_empty() {
        return Err(GraphError::EmptyInput);
    }
    let mut left: Vec<String> = Vec::new();
    let mut right: Vec<String> = Vec::new();
    let mut left_ix: HashMap<String, usize> = HashMap::new();
    let mut right_ix: HashMap<String, usize> = HashMap::new();
    let mut edges = BTreeSet::new();
    for (a, b) in raw_edges {
        let a = a.as_ref().to_string();
        let b = b.as_ref().to_string();
        let i = *left_ix.entry(a.clone()).or_insert_with(|| {
            left.push(a);
            left.len() - 1
        });
        let j = *right_ix.entry(b.clone()).or_insert_with(|| {
            right.push(b);
            right.len() - 1
        });
        edges.insert((i, j));
    }
    normalize_indexed(&left, &right, &edges)
}

fn normalize_indexed(
    left: &[String],
    right: &[String],
    edges: &BTreeSet<(usize, usize)>,
) -> Result<BipartiteGraph, GraphError> {
    let (nl, nr) = (left.len(), right.len());
    if nl != nr {
        return Err(GraphError::NoPerfectMatching { left: nl, right: nr });
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nl];
    for &(i, j) in edges {
        adj[i].push(j);
    }
    let matched_left = perfect_matching(&adj, nr)
        .ok_or(GraphError::NoPerfectMatching { left: nl, right: nr })?;
    // matched_left[i] = right vertex matched to left i; new right index of
    // that vertex is i.
    let mut new_right = vec![0usize; nr];
    for (i, &j) in matched_left.iter().enumerate() {
        new_right[j] = i;
    }
    let relabeled = edges.iter().map(|&(i, j)| (i, new_right[j]));
    let mut g = BipartiteGraph::new(nl, nr, relabeled)?;
    g.labels = Some(VertexLabels {
        left: left.to_vec(),
        right: matched_left.iter().map(|&j| right[j].clone()).collect(),
    });
    Ok(g)
}

/// Augmenting-path matching. Returns the right partner of each left vertex
/// if the matching saturates the left side.
fn perfect_matching(adj: &[Vec<usize>], right: usize) -> Option<Vec<usize>> {
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].map_or(true, |w| augment(w, adj, seen, owner)) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }
    let mut owner: Vec<Option<usize>> = vec![None; right];
    for u in 0..adj.len() {
        let mut seen = vec![false; right];
        if !augment(u, adj, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut partner = vec![0usize; adj.len()];
    for (v, o) in owner.iter().enumerate() {
        if let Some(u) = o {
            partner[*u] = v;
        }
    }
    Some(partner)
}

/// All minimal vertex covers, with the default enumeration bound.
pub fn minimal_vertex_covers(g: &BipartiteGraph) -> Result<Vec<VertexCover>, GraphError> {
    minimal_vertex_covers_bounded(g, DEFAULT_ENUMERATION_BOUND)
}

/// All minimal vertex covers of `g`, sorted.
///
/// A minimal cover is determined by its `x` part `xs`: its `y` part must be
/// exactly the neighbors of the uncovered `x` vertices, and it is minimal iff
/// every `x_i` in `xs` still has a neighbor outside that `y` part. All
/// `2^left` choices of `xs` are tried.
pub fn minimal_vertex_covers_bounded(
    g: &BipartiteGraph,
    bound: usize,
) -> Result<Vec<VertexCover>, GraphError> {
    let vertices = g.left + g.right;
    if vertices > bound {
        return Err(GraphError::TooLarge { vertices, bound });
    }
    let adj = g.right_neighbors();
    let mut covers = Vec::new();
    for xs in 0u64..(1u64 << g.left) {
        let mut ys = 0u32;
        for (i, &a) in adj.iter().enumerate() {
            if xs & (1 << i) == 0 {
                ys |= a;
            }
        }
        let minimal = adj
            .iter()
            .enumerate()
            .all(|(i, &a)| xs & (1 << i) == 0 || a & !ys != 0);
        if minimal {
            covers.push(VertexCover {
                xs: SubsetMask::from_bits(xs as u32, g.left).expect("within left side"),
                ys: SubsetMask::from_bits(ys, g.right).expect("within right side"),
            });
        }
    }
    covers.sort();
    Ok(covers)
}

/// Whether all minimal vertex covers have the same size.
pub fn is_unmixed(g: &BipartiteGraph) -> Result<bool, GraphError> {
    let covers = minimal_vertex_covers(g)?;
    Ok(covers.windows(2).all(|w| w[0].len() == w[1].len()))
}

/// The vertex-cover lattice `{xs(C) : C minimal}` of a normalized unmixed
/// graph. The result is checked against [`cover_lattice_fast`].
pub fn cover_lattice(g: &BipartiteGraph) -> Result<CoverLattice, GraphError> {
    if !g.is_normalized() {
        return Err(GraphError::NotNormalized);
    }
    let covers = minimal_vertex_covers(g)?;
    if covers.iter().any(|c| c.len() != g.n()) {
        return Err(GraphError::NotUnmixed);
    }
    let lattice = CoverLattice::validate(covers.iter().map(|c| c.xs), g.n())
        .map_err(|e| GraphError::LatticeValidation(e.to_string()))?;
    let fast = cover_lattice_fast(g)?;
    if fast.elements() != lattice.elements() {
        return Err(GraphError::LatticeValidation(
            "enumerated covers disagree with the edge-implication lattice".into(),
        ));
    }
    Ok(lattice)
}

/// `{p ⊆ [n] : for every edge (i, j), j ∈ p ⇒ i ∈ p}` for a normalized graph.
///
/// For unmixed graphs this is the vertex-cover lattice; it needs no cover
/// enumeration, so the enumeration bound does not apply.
pub fn cover_lattice_fast(g: &BipartiteGraph) -> Result<CoverLattice, GraphError> {
    if !g.is_normalized() {
        return Err(GraphError::NotNormalized);
    }
    let n = g.n();
    // requires[j]: every i that must be present whenever j is.
    let mut requires = vec![0u32; n];
    for (i, j) in g.edges() {
        if i != j {
            requires[j] |= 1 << i;
        }
    }
    let mut found = Vec::new();
    downsets(&requires, 0, 0, 0, &mut found);
    let family = found
        .into_iter()
        .map(|b| SubsetMask::from_bits(b, n).expect("within ground set"));
    CoverLattice::validate(family, n).map_err(|e| GraphError::LatticeValidation(e.to_string()))
}

fn downsets(requires: &[u32], k: usize, inc: u32, exc: u32, out: &mut Vec<u32>) {
    if k == requires.len() {
        out.push(inc);
        return;
    }
    let bit = 1u32 << k;
    // include k: its requirements must not be excluded
    if requires[k] & exc == 0 {
        downsets(requires, k + 1, inc | bit, exc, out);
    }
    // exclude k: nothing already included may require it
    let blocked = (0..k).any(|j| inc & (1 << j) != 0 && requires[j] & bit != 0);
    if !blocked {
        downsets(requires, k + 1, inc, exc | bit, out);
    }
}

/// The normalized graph whose cover lattice is `lattice`: `(i, j)` is an edge
/// iff every element containing `j` also contains `i`.
pub fn graph_from_lattice(lattice: &CoverLattice) -> BipartiteGraph {
    let n = lattice.n();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if lattice.elements().iter().all(|p| !p.contains(j) || p.contains(i)) {
                edges.push((i, j));
            }
        }
    }
    BipartiteGraph::new(n, n, edges).expect("diagonal edges make every vertex non-isolated")
}

impl From<LatticeError> for GraphError {
    fn from(e: LatticeError) -> Self {
        GraphError::LatticeValidation(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn m(n: usize, labels: &[usize]) -> SubsetMask {
        SubsetMask::from_labels(n, labels.iter().copied()).unwrap()
    }

    fn cover(nl: usize, nr: usize, xs: &[usize], ys: &[usize]) -> VertexCover {
        VertexCover { xs: m(nl, xs), ys: m(nr, ys) }
    }

    /// Every subset of all vertices, kept if it is a cover and no single
    /// vertex can be dropped.
    fn brute_force_covers(g: &BipartiteGraph) -> Vec<VertexCover> {
        let (nl, nr) = (g.left(), g.right());
        let is_cover = |xs: u32, ys: u32| g.edges().all(|(i, j)| xs & (1 << i) != 0 || ys & (1 << j) != 0);
        let mut out = Vec::new();
        for all in 0u64..(1u64 << (nl + nr)) {
            let xs = (all & ((1 << nl) - 1)) as u32;
            let ys = (all >> nl) as u32;
            if !is_cover(xs, ys) {
                continue;
            }
            let drop_x = (0..nl).any(|i| xs & (1 << i) != 0 && is_cover(xs & !(1 << i), ys));
            let drop_y = (0..nr).any(|j| ys & (1 << j) != 0 && is_cover(xs, ys & !(1 << j)));
            if !drop_x && !drop_y {
                out.push(VertexCover {
                    xs: SubsetMask::from_bits(xs, nl).unwrap(),
                    ys: SubsetMask::from_bits(ys, nr).unwrap(),
                });
            }
        }
        out.sort();
        out
    }

    #[test]
    fn normalize_examples() {
        let g = normalize_graph(&[("a", "b")]).unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 0)]);

        let k22 = normalize_graph(&[("a1", "b1"), ("a1", "b2"), ("a2", "b1"), ("a2", "b2")]).unwrap();
        assert_eq!(k22.n(), 2);
        assert!(k22.has_edge(0, 0) && k22.has_edge(1, 1));
        assert_eq!(k22.edge_count(), 4);

        assert_eq!(
            normalize_graph(&[("a", "b1"), ("a", "b2")]).unwrap_err(),
            GraphError::NoPerfectMatching { left: 1, right: 2 }
        );
        let empty: [(&str, &str); 0] = [];
        assert_eq!(normalize_graph(&empty).unwrap_err(), GraphError::EmptyInput);
    }

    #[test]
    fn normalize_relabels_right_side() {
        // x1-y2, x2-y1, x2-y2: the only perfect matching is x1-y2, x2-y1.
        let g = normalize_graph(&[("x1", "y2"), ("x2", "y1"), ("x2", "y2")]).unwrap();
        assert!(g.is_normalized());
        assert_eq!(g.labels().unwrap().right, vec!["y2".to_string(), "y1".to_string()]);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 0), (1, 0), (1, 1)]);
    }

    #[test]
    fn no_perfect_matching_with_equal_sides() {
        // x1 and x2 both only see y1.
        let err = normalize_graph(&[("x1", "y1"), ("x2", "y1"), ("x3", "y2"), ("x3", "y3")]).unwrap_err();
        assert!(matches!(err, GraphError::NoPerfectMatching { .. }));
    }

    #[test]
    fn cover_examples() {
        let e1 = BipartiteGraph::new(1, 1, [(0, 0)]).unwrap();
        assert_eq!(
            minimal_vertex_covers(&e1).unwrap(),
            vec![cover(1, 1, &[], &[1]), cover(1, 1, &[1], &[])]
        );
        let k22 = BipartiteGraph::new(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        assert_eq!(
            minimal_vertex_covers(&k22).unwrap(),
            vec![cover(2, 2, &[], &[1, 2]), cover(2, 2, &[1, 2], &[])]
        );
        let path = BipartiteGraph::new(2, 2, [(0, 0), (0, 1), (1, 1)]).unwrap();
        let mut expected = vec![
            cover(2, 2, &[1, 2], &[]),
            cover(2, 2, &[1], &[2]),
            cover(2, 2, &[], &[1, 2]),
        ];
        expected.sort();
        assert_eq!(minimal_vertex_covers(&path).unwrap(), expected);
    }

    #[test]
    fn covers_match_brute_force() {
        let graphs = vec![
            BipartiteGraph::new(2, 2, [(0, 0), (0, 1), (1, 1)]).unwrap(),
            BipartiteGraph::new(1, 2, [(0, 0), (0, 1)]).unwrap(),
            BipartiteGraph::new(3, 3, [(0, 0), (1, 1), (2, 2), (0, 2), (1, 0)]).unwrap(),
            BipartiteGraph::new(3, 2, [(0, 0), (1, 1), (2, 0), (2, 1)]).unwrap(),
        ];
        for g in graphs {
            assert_eq!(minimal_vertex_covers(&g).unwrap(), brute_force_covers(&g));
        }
    }

    #[test]
    fn unmixed_examples() {
        let k22 = BipartiteGraph::new(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        assert!(is_unmixed(&k22).unwrap());
        let path = BipartiteGraph::new(2, 2, [(0, 0), (0, 1), (1, 1)]).unwrap();
        assert!(is_unmixed(&path).unwrap());
        let star = BipartiteGraph::new(1, 2, [(0, 0), (0, 1)]).unwrap();
        assert!(!is_unmixed(&star).unwrap());
    }

    #[test]
    fn enumeration_bound() {
        let g = graph_from_lattice(&crate::lattice::random_sublattice(13, 2, 1).unwrap());
        assert_eq!(
            minimal_vertex_covers(&g).unwrap_err(),
            GraphError::TooLarge { vertices: 26, bound: 24 }
        );
        assert!(minimal_vertex_covers_bounded(&g, 26).is_ok());
        assert!(cover_lattice_fast(&g).is_ok());
    }

    #[test]
    fn lattice_examples() {
        let e1 = BipartiteGraph::new(1, 1, [(0, 0)]).unwrap();
        assert_eq!(cover_lattice(&e1).unwrap().elements(), fixtures::e1().elements());
        let k22 = BipartiteGraph::new(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        assert_eq!(cover_lattice(&k22).unwrap().elements(), fixtures::k22().elements());
        let path = BipartiteGraph::new(2, 2, [(0, 0), (0, 1), (1, 1)]).unwrap();
        assert_eq!(cover_lattice(&path).unwrap().elements(), fixtures::chain().elements());
    }

    #[test]
    fn lattice_errors() {
        let star = BipartiteGraph::new(1, 2, [(0, 0), (0, 1)]).unwrap();
        assert_eq!(cover_lattice(&star).unwrap_err(), GraphError::NotNormalized);
        // x1y2 and x2y3 without x1y3 breaks transitivity, so not unmixed:
        // {x1, x2, y3}... vs {y1, y2, y3}... have different sizes.
        let g = BipartiteGraph::new(3, 3, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)]).unwrap();
        assert!(!is_unmixed(&g).unwrap());
        assert_eq!(cover_lattice(&g).unwrap_err(), GraphError::NotUnmixed);
    }

    #[test]
    fn graph_from_lattice_examples() {
        let edges = |l: &CoverLattice| graph_from_lattice(l).edges().collect::<Vec<_>>();
        assert_eq!(edges(&fixtures::e1()), vec![(0, 0)]);
        assert_eq!(edges(&fixtures::k22()), vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert_eq!(edges(&fixtures::chain()), vec![(0, 0), (0, 1), (1, 1)]);
        assert_eq!(edges(&fixtures::b2()), vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn round_trip_fixtures() {
        for l in fixtures::all() {
            let g = graph_from_lattice(&l);
            assert!(g.is_normalized());
            assert!(is_unmixed(&g).unwrap());
            assert_eq!(cover_lattice(&g).unwrap().elements(), l.elements());
            assert_eq!(cover_lattice_fast(&g).unwrap().elements(), l.elements());
        }
    }

    #[test]
    fn minimal_covers_of_unmixed_are_complementary() {
        for l in fixtures::all() {
            let g = graph_from_lattice(&l);
            for c in minimal_vertex_covers(&g).unwrap() {
                assert_eq!(c.ys.bits(), c.xs.complement().bits());
            }
        }
    }
}
