use proptest::prelude::*;

use unmixed::graph::{cover_lattice, cover_lattice_fast, graph_from_lattice, minimal_vertex_covers};
use unmixed::ideal::{alexander_dual, edge_ideal, hibi_ideal, lcm_closure};
use unmixed::lattice::random_sublattice;
use unmixed::resolution::{build_resolution, expected_level_ranks, strand_exactness, verify_complex, verify_minimality};
use unmixed::verify::{lemma1_cardinality, lemma1_distinct_meets, lemma2, phi_bijective, rank_two};
use unmixed::{CoverLattice, SubsetMask};

fn lattice() -> impl Strategy<Value = CoverLattice> {
    (1usize..=6, 1usize..=5, any::<u64>()).prop_map(|(n, k, seed)| random_sublattice(n, k, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lemmas_hold(l in lattice()) {
        prop_assert!(lemma1_distinct_meets(&l).is_ok());
        prop_assert!(lemma1_cardinality(&l).is_ok());
        prop_assert!(rank_two(&l).is_ok());
        prop_assert!(lemma2(&l).is_ok());
        prop_assert!(phi_bijective(&l).is_ok());
    }

    #[test]
    fn graphs_round_trip(l in lattice()) {
        let g = graph_from_lattice(&l);
        prop_assert_eq!(&cover_lattice(&g).unwrap(), &l);
        prop_assert_eq!(&cover_lattice_fast(&g).unwrap(), &l);
        for c in minimal_vertex_covers(&g).unwrap() {
            prop_assert_eq!(c.len(), l.n());
            prop_assert_eq!(c.ys, c.xs.complement());
        }
    }

    #[test]
    fn duality_is_involutive(l in lattice()) {
        let h = hibi_ideal(&l);
        let e = edge_ideal(&graph_from_lattice(&l));
        prop_assert_eq!(h.gens().len(), l.len());
        prop_assert_eq!(&alexander_dual(&h).unwrap(), &e);
        prop_assert_eq!(&alexander_dual(&e).unwrap(), &h);
        let closure = lcm_closure(&h);
        let all = unmixed::Monomial::all_variables(l.n());
        prop_assert!(closure.iter().all(|b| b.divides(&all)));
        let top = h.gens().iter().fold(unmixed::Monomial::one(l.n()), |a, g| a.lcm(g));
        prop_assert!(closure.contains(&top));
    }

    #[test]
    fn resolution_is_exact(l in lattice()) {
        let r = build_resolution(&l).unwrap();
        prop_assert!(verify_complex(&r.complex).is_ok());
        prop_assert!(verify_minimality(&r.complex));
        prop_assert_eq!(r.level_ranks(), expected_level_ranks(&l));
        let h = hibi_ideal(&l);
        for b in lcm_closure(&h) {
            prop_assert!(strand_exactness(&r.complex, &h, &b));
        }
    }

    #[test]
    fn order_extends_inclusion(n in 1usize..=8, a in any::<u32>(), b in any::<u32>()) {
        let mask = (1u32 << n) - 1;
        let p = SubsetMask::from_bits(a & mask, n).unwrap();
        let q = SubsetMask::from_bits(b & mask, n).unwrap();
        if p.is_proper_subset(q) {
            prop_assert!(p < q);
        }
    }
}
