//! Built-in example lattices.
//!
//! | name    | n | elements                                   |
//! |---------|---|--------------------------------------------|
//! | `E1`    | 1 | `∅, {1}` (a single edge)                   |
//! | `K22`   | 2 | `∅, {1,2}` (the complete graph `K_{2,2}`)  |
//! | `CHAIN` | 2 | `∅, {1}, {1,2}` (a path on four vertices)  |
//! | `B2`    | 2 | all of `B_2` (two disjoint edges)          |
//! | `FIG1`  | 7 | see [`fig1`]                               |

use crate::lattice::CoverLattice;
use crate::mask::SubsetMask;

fn build(n: usize, elements: &[&[usize]]) -> CoverLattice {
    let family = elements
        .iter()
        .map(|e| SubsetMask::from_labels(n, e.iter().copied()).expect("fixture labels in range"));
    CoverLattice::validate(family, n).expect("fixture is a sublattice")
}

pub fn e1() -> CoverLattice {
    build(1, &[&[], &[1]])
}

pub fn k22() -> CoverLattice {
    build(2, &[&[], &[1, 2]])
}

pub fn chain() -> CoverLattice {
    build(2, &[&[], &[1], &[1, 2]])
}

pub fn b2() -> CoverLattice {
    build(2, &[&[], &[1], &[2], &[1, 2]])
}

/// A ten-element sublattice of `B_7`: the product of the chains
/// `∅ < {1,2} < {1,2,5}` and `∅ < {3} < {3,4}` (joins taken as unions),
/// with `[7]` added on top.
///
/// `f` is 1 at `{1,2,3}`, `{1,2,3,4}` and `[7]`, and 0 at `{1,2,3,5}` and
/// `{1,2,3,4,5}`. The edge ring has projective dimension 8 and a single
/// graded extremal Betti number, `β_{8,10} = 2`.
pub fn fig1() -> CoverLattice {
    build(
        7,
        &[
            &[],
            &[3],
            &[1, 2],
            &[3, 4],
            &[1, 2, 3],
            &[1, 2, 5],
            &[1, 2, 3, 4],
            &[1, 2, 3, 5],
            &[1, 2, 3, 4, 5],
            &[1, 2, 3, 4, 5, 6, 7],
        ],
    )
}

/// The four small fixtures, in the order `E1, K22, CHAIN, B2`.
pub fn small() -> Vec<CoverLattice> {
    vec![e1(), k22(), chain(), b2()]
}

/// Every fixture, `FIG1` last.
pub fn all() -> Vec<CoverLattice> {
    let mut v = small();
    v.push(fig1());
    v
}

/// `(name, lattice)` pairs for every fixture.
pub fn named() -> Vec<(&'static str, CoverLattice)> {
    vec![("E1", e1()), ("K22", k22()), ("CHAIN", chain()), ("B2", b2()), ("FIG1", fig1())]
}

/// Looks a fixture up by (case-insensitive) name.
pub fn by_name(name: &str) -> Option<CoverLattice> {
    named()
        .into_iter()
        .find(|(k, _)| k.eq_ignore_ascii_case(name))
        .map(|(_, l)| l)
}
