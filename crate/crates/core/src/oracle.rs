//! Formula-free Betti numbers of squarefree monomial ideals.
//!
//! For a squarefree multidegree `b`, the upper Koszul simplicial complex
//! `K^b(I)` consists of the variable sets `τ ⊆ supp(b)` with `b / x^τ ∈ I`,
//! and `β_{i,b}(I) = dim H̃_{i-1}(K^b(I))`. Nonzero Betti numbers only occur
//! at lcms of generators, so the oracle evaluates exactly the lcm closure.

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::betti::{BettiTable, Subject};
use crate::ideal::{lcm_closure, Monomial, MonomialIdeal};
use crate::linalg::{Field, SparseMatrix};
use crate::resolution::{FreeComplex, Term};

/// Default cap on the size of the lcm closure the oracle will walk.
pub const DEFAULT_CLOSURE_CAP: usize = 5000;

/// Largest generator count accepted by [`taylor_complex`].
pub const TAYLOR_GENERATOR_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("lcm closure has {size} elements, above the cap of {cap}")]
    ClosureTooLarge { size: usize, cap: usize },
    #[error("the zero ideal has no Betti numbers")]
    ZeroIdeal,
    #[error("{0} generators are too many for a Taylor complex")]
    TooManyGenerators(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub field: Field,
    pub closure_cap: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { field: Field::Rational, closure_cap: DEFAULT_CLOSURE_CAP }
    }
}

/// A finite simplicial complex on packed variable indices. Faces are bit
/// sets, grouped by size: `faces[k]` holds the faces with `k` vertices.
/// A void complex has no faces at all, not even `∅`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: u64,
    faces: Vec<Vec<u64>>,
}

impl SimplicialComplex {
    /// The complex generated by `faces`, checked for closure under subsets.
    /// Returns `None` if some subset of a listed face is missing.
    pub fn from_faces<I: IntoIterator<Item = u64>>(vertices: u64, faces: I) -> Option<Self> {
        let mut by_size: Vec<Vec<u64>> = Vec::new();
        for f in faces {
            if f & !vertices != 0 {
                return None;
            }
            let k = f.count_ones() as usize;
            if by_size.len() <= k {
                by_size.resize(k + 1, Vec::new());
            }
            by_size[k].push(f);
        }
        for level in by_size.iter_mut() {
            level.sort_unstable();
            level.dedup();
        }
        let c = SimplicialComplex { vertices, faces: by_size };
        c.is_closed().then_some(c)
    }

    /// The full simplex on `vertices`, `∅` included.
    pub fn simplex(vertices: u64) -> Self {
        let mut faces = Vec::new();
        let mut sub = vertices;
        loop {
            faces.push(sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & vertices;
        }
        Self::from_faces(vertices, faces).expect("a simplex is closed")
    }

    fn is_closed(&self) -> bool {
        for (k, level) in self.faces.iter().enumerate().skip(1) {
            let below = &self.faces[k - 1];
            for &f in level {
                let mut rest = f;
                while rest != 0 {
                    let v = rest & rest.wrapping_neg();
                    if below.binary_search(&(f & !v)).is_err() {
                        return false;
                    }
                    rest &= rest - 1;
                }
            }
        }
        true
    }

    pub fn vertex_set(&self) -> u64 {
        self.vertices
    }

    pub fn is_void(&self) -> bool {
        self.faces.first().map_or(true, Vec::is_empty)
    }

    /// Faces with `k` vertices (dimension `k - 1`).
    pub fn faces_of_size(&self, k: usize) -> &[u64] {
        self.faces.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn face_count(&self) -> usize {
        self.faces.iter().map(Vec::len).sum()
    }

    /// Largest face size.
    pub fn max_face_size(&self) -> usize {
        self.faces.iter().rposition(|l| !l.is_empty()).unwrap_or(0)
    }

    /// Boundary map from faces of size `k` to faces of size `k - 1`, one
    /// row per source face. Removing the `t`-th smallest vertex carries sign
    /// `(-1)^t`.
    pub fn boundary(&self, k: usize) -> SparseMatrix {
        let sources = self.faces_of_size(k);
        let targets = self.faces_of_size(k - 1);
        let index: HashMap<u64, usize> = targets.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let mut m = SparseMatrix::new(sources.len(), targets.len());
        for (r, &f) in sources.iter().enumerate() {
            let mut rest = f;
            let mut t = 0;
            while rest != 0 {
                let v = rest & rest.wrapping_neg();
                let sign = if t % 2 == 0 { 1 } else { -1 };
                m.add(r, index[&(f & !v)], sign);
                rest &= rest - 1;
                t += 1;
            }
        }
        m
    }
}

/// `K^b(I)`: faces `τ ⊆ supp(b)` such that some generator divides `b / x^τ`.
pub fn upper_koszul_complex(ideal: &MonomialIdeal, b: &Monomial) -> SimplicialComplex {
    let support = b.support_bits();
    let gens: Vec<u64> = ideal
        .gens()
        .iter()
        .filter(|g| g.divides(b))
        .map(Monomial::support_bits)
        .collect();
    let mut faces = Vec::new();
    let mut tau = support;
    loop {
        let rest = support & !tau;
        if gens.iter().any(|&g| g & !rest == 0) {
            faces.push(tau);
        }
        if tau == 0 {
            break;
        }
        tau = (tau - 1) & support;
    }
    SimplicialComplex::from_faces(support, faces).expect("upper Koszul complexes are closed under subsets")
}

/// Dimensions of reduced homology `H̃_{-1}, H̃_0, …, H̃_{d}` where `d` is the
/// dimension of the complex. A void complex has all-zero homology.
pub fn reduced_homology_ranks(complex: &SimplicialComplex, field: Field) -> Vec<usize> {
    if complex.is_void() {
        return vec![0];
    }
    let top = complex.max_face_size();
    // rank of the boundary leaving faces of size k, for k = 1..=top
    let mut ranks = vec![0usize; top + 2];
    for (k, slot) in ranks.iter_mut().enumerate().take(top + 1).skip(1) {
        *slot = complex.boundary(k).rank(field);
    }
    (0..=top)
        .map(|k| complex.faces_of_size(k).len() - ranks[k] - ranks[k + 1])
        .collect()
}

/// `β_{i,b}(I)` for all `i`, as `(i, value)` pairs with nonzero value.
pub fn betti_at(ideal: &MonomialIdeal, b: &Monomial, field: Field) -> Vec<(usize, u64)> {
    let k = upper_koszul_complex(ideal, b);
    reduced_homology_ranks(&k, field)
        .into_iter()
        .enumerate()
        .filter(|&(_, h)| h > 0)
        .map(|(i, h)| (i, h as u64))
        .collect()
}

/// The complete multigraded Betti table of the ideal `I`.
pub fn betti_oracle(ideal: &MonomialIdeal, config: OracleConfig) -> Result<BettiTable, OracleError> {
    if ideal.is_zero() {
        return Err(OracleError::ZeroIdeal);
    }
    let closure = lcm_closure(ideal);
    if closure.len() > config.closure_cap {
        return Err(OracleError::ClosureTooLarge { size: closure.len(), cap: config.closure_cap });
    }
    Ok(betti_oracle_over(ideal, &closure, config.field))
}

/// Betti numbers of `I` at the given multidegrees only.
pub fn betti_oracle_over(ideal: &MonomialIdeal, degrees: &[Monomial], field: Field) -> BettiTable {
    let found: Vec<(Monomial, Vec<(usize, u64)>)> = degrees
        .par_iter()
        .map(|b| (*b, betti_at(ideal, b, field)))
        .collect();
    let mut table = BettiTable::new(ideal.n(), Subject::Ideal);
    for (b, values) in found {
        for (i, v) in values {
            table.add(i, b, v);
        }
    }
    table
}

/// The Taylor resolution of `I`: one basis element per nonempty set of
/// generators, in multidegree equal to their lcm.
pub fn taylor_complex(ideal: &MonomialIdeal) -> Result<FreeComplex, OracleError> {
    let gens = ideal.gens();
    let m = gens.len();
    if m == 0 {
        return Err(OracleError::ZeroIdeal);
    }
    if m > TAYLOR_GENERATOR_CAP {
        return Err(OracleError::TooManyGenerators(m));
    }
    let n = ideal.n();
    let mut levels: Vec<Vec<u32>> = vec![Vec::new(); m];
    for set in 1u32..(1u32 << m) {
        levels[set.count_ones() as usize - 1].push(set);
    }
    let lcm_of = |set: u32| {
        (0..m)
            .filter(|k| set & (1 << k) != 0)
            .fold(Monomial::one(n), |acc, k| acc.lcm(&gens[k]))
    };
    let position: Vec<HashMap<u32, usize>> = levels
        .iter()
        .map(|l| l.iter().enumerate().map(|(i, &s)| (s, i)).collect())
        .collect();
    let mut diffs = Vec::new();
    for lvl in 1..m {
        let mut terms = Vec::new();
        for (src, &set) in levels[lvl].iter().enumerate() {
            let md = lcm_of(set);
            for (t, k) in (0..m).filter(|k| set & (1 << k) != 0).enumerate() {
                let face = set & !(1 << k);
                let coefficient = md.quotient(&lcm_of(face)).expect("lcm of a subset divides");
                terms.push(Term {
                    source: src,
                    target: position[lvl - 1][&face],
                    sign: if t % 2 == 0 { 1 } else { -1 },
                    monomial: coefficient,
                });
            }
        }
        diffs.push(terms);
    }
    Ok(FreeComplex {
        n,
        multidegrees: levels.iter().map(|l| l.iter().map(|&s| lcm_of(s)).collect()).collect(),
        diffs,
        augmentation: gens.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::ideal::hibi_ideal;
    use crate::mask::SubsetMask;

    fn mono(n: usize, x: &[usize], y: &[usize]) -> Monomial {
        Monomial::new(
            SubsetMask::from_labels(n, x.iter().copied()).unwrap(),
            SubsetMask::from_labels(n, y.iter().copied()).unwrap(),
        )
    }

    const FIELDS: [Field; 3] = [Field::Rational, Field::Prime(2), Field::Prime(32749)];

    #[test]
    fn koszul_examples() {
        let i = MonomialIdeal::new(1, [mono(1, &[1], &[1])]).unwrap();
        let k = upper_koszul_complex(&i, &mono(1, &[1], &[1]));
        assert_eq!(k.face_count(), 1);
        assert_eq!(k.faces_of_size(0), &[0]);

        let i = MonomialIdeal::new(1, [mono(1, &[1], &[]), mono(1, &[], &[1])]).unwrap();
        let k = upper_koszul_complex(&i, &mono(1, &[1], &[1]));
        assert_eq!(k.faces_of_size(0).len(), 1);
        assert_eq!(k.faces_of_size(1).len(), 2);
        assert_eq!(k.max_face_size(), 1);

        // packed bits for n = 2: x1=1, x2=2, y1=4, y2=8
        let h = hibi_ideal(&fixtures::b2());
        let k = upper_koszul_complex(&h, &Monomial::all_variables(2));
        assert_eq!(k.faces_of_size(1).len(), 4);
        let mut edges = k.faces_of_size(2).to_vec();
        edges.sort();
        let mut expected = vec![0b0011, 0b1001, 0b0110, 0b1100];
        expected.sort();
        assert_eq!(edges, expected);
        assert!(k.faces_of_size(3).is_empty());
    }

    #[test]
    fn homology_examples() {
        for f in FIELDS {
            let point = SimplicialComplex::simplex(0b1);
            assert_eq!(reduced_homology_ranks(&point, f), vec![0, 0]);
            let two = SimplicialComplex::from_faces(0b11, [0, 0b01, 0b10]).unwrap();
            assert_eq!(reduced_homology_ranks(&two, f), vec![0, 1]);
            let cycle = SimplicialComplex::from_faces(
                0b1111,
                [0, 1, 2, 4, 8, 0b0011, 0b0110, 0b1100, 0b1001],
            )
            .unwrap();
            assert_eq!(reduced_homology_ranks(&cycle, f), vec![0, 0, 1]);
            assert_eq!(cycle.boundary(1).rank(f), 1);
            assert_eq!(cycle.boundary(2).rank(f), 3);
        }
        let void = SimplicialComplex::from_faces(0b11, []).unwrap();
        assert!(void.is_void());
        assert_eq!(reduced_homology_ranks(&void, Field::Rational), vec![0]);
        let empty_face = SimplicialComplex::from_faces(0, [0]).unwrap();
        assert_eq!(reduced_homology_ranks(&empty_face, Field::Rational), vec![1]);
    }

    #[test]
    fn rejects_non_closed_faces() {
        assert!(SimplicialComplex::from_faces(0b11, [0, 0b11]).is_none());
        assert!(SimplicialComplex::from_faces(0b01, [0, 0b10]).is_none());
    }

    #[test]
    fn cones_are_acyclic() {
        // cone over the hollow 4-cycle with apex bit 4
        let base = [0u64, 1, 2, 4, 8, 0b0011, 0b0110, 0b1100, 0b1001];
        let apex = 1 << 4;
        let faces = base.iter().flat_map(|&f| [f, f | apex]);
        let cone = SimplicialComplex::from_faces(0b11111, faces).unwrap();
        for f in FIELDS {
            assert!(reduced_homology_ranks(&cone, f).iter().all(|&h| h == 0));
        }
        for vertices in [0b1u64, 0b111, 0b11111, 0b1111111] {
            let s = SimplicialComplex::simplex(vertices);
            assert!(reduced_homology_ranks(&s, Field::Rational).iter().all(|&h| h == 0));
        }
    }

    #[test]
    fn real_projective_plane_depends_on_characteristic() {
        // 6-vertex triangulation of RP^2: H̃_1 = Z/2, so over GF(2) both
        // H̃_1 and H̃_2 are 1 while over Q everything vanishes.
        let tris: [[u64; 3]; 10] = [
            [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1],
            [1, 2, 4], [2, 3, 5], [3, 4, 1], [4, 5, 2], [5, 1, 3],
        ];
        let mut faces = Vec::new();
        for t in tris {
            let f: u64 = t.iter().map(|&v| 1u64 << v).sum();
            let mut sub = f;
            loop {
                faces.push(sub);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & f;
            }
        }
        let rp2 = SimplicialComplex::from_faces(0b111111, faces).unwrap();
        assert_eq!(reduced_homology_ranks(&rp2, Field::Rational), vec![0, 0, 0, 0]);
        assert_eq!(reduced_homology_ranks(&rp2, Field::Prime(2)), vec![0, 0, 1, 1]);
        assert_eq!(reduced_homology_ranks(&rp2, Field::Prime(32749)), vec![0, 0, 0, 0]);
    }

    #[test]
    fn oracle_examples() {
        let principal = MonomialIdeal::new(1, [mono(1, &[1], &[1])]).unwrap();
        let t = betti_oracle(&principal, OracleConfig::default()).unwrap();
        assert_eq!(t.entries().collect::<Vec<_>>(), vec![(0, mono(1, &[1], &[1]), 1)]);

        let pair = MonomialIdeal::new(2, [mono(2, &[1], &[1]), mono(2, &[2], &[2])]).unwrap();
        let t = betti_oracle(&pair, OracleConfig::default()).unwrap();
        assert_eq!(
            t.entries().collect::<Vec<_>>(),
            vec![
                (0, mono(2, &[1], &[1]), 1),
                (0, mono(2, &[2], &[2]), 1),
                (1, mono(2, &[1, 2], &[1, 2]), 1)
            ]
        );

        let t = betti_oracle(&hibi_ideal(&fixtures::chain()), OracleConfig::default()).unwrap();
        assert_eq!(t.totals(), vec![3, 2]);
        assert_eq!(t.get(1, &mono(2, &[1], &[1, 2])), 1);
        assert_eq!(t.get(1, &mono(2, &[1, 2], &[2])), 1);
    }

    #[test]
    fn oracle_generators_in_degree_zero() {
        for l in fixtures::small() {
            let h = hibi_ideal(&l);
            let t = betti_oracle(&h, OracleConfig::default()).unwrap();
            let zero: Vec<Monomial> = t.entries().filter(|e| e.0 == 0).map(|e| e.1).collect();
            assert_eq!(zero.len(), h.gens().len());
            assert!(t.entries().filter(|e| e.0 == 0).all(|e| e.2 == 1));
            for g in h.gens() {
                assert!(zero.contains(g));
            }
        }
    }

    #[test]
    fn closure_cap() {
        let h = hibi_ideal(&fixtures::b2());
        let cfg = OracleConfig { closure_cap: 8, ..Default::default() };
        assert_eq!(betti_oracle(&h, cfg).unwrap_err(), OracleError::ClosureTooLarge { size: 9, cap: 8 });
        assert_eq!(
            betti_oracle(&MonomialIdeal::new(2, []).unwrap(), OracleConfig::default()).unwrap_err(),
            OracleError::ZeroIdeal
        );
    }

    #[test]
    fn taylor_shape() {
        let h = hibi_ideal(&fixtures::b2());
        let t = taylor_complex(&h).unwrap();
        let ranks: Vec<usize> = t.multidegrees.iter().map(Vec::len).collect();
        assert_eq!(ranks, vec![4, 6, 4, 1]);
        assert_eq!(ranks.iter().sum::<usize>(), 15);
    }
}
