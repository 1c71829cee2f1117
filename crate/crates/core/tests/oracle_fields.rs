use unmixed::betti::invariants_from_table;
use unmixed::graph::graph_from_lattice;
use unmixed::ideal::{edge_ideal, hibi_ideal, Monomial, MonomialIdeal};
use unmixed::oracle::{betti_oracle, OracleConfig};
use unmixed::resolution::betti_table_from_basis;
use unmixed::{fixtures, Field, SubsetMask};

fn oracle(i: &MonomialIdeal, field: Field) -> unmixed::BettiTable {
    betti_oracle(i, OracleConfig { field, ..OracleConfig::default() }).unwrap()
}

#[test]
fn rationals_agree_with_primes_on_fixtures() {
    for l in fixtures::small() {
        for i in [hibi_ideal(&l), edge_ideal(&graph_from_lattice(&l))] {
            let q = oracle(&i, Field::Rational);
            assert_eq!(q, oracle(&i, Field::Prime(2)), "{i}");
            assert_eq!(q, oracle(&i, Field::Prime(32749)), "{i}");
        }
    }
}

#[test]
fn fig1_hibi_agrees_over_primes() {
    let h = hibi_ideal(&fixtures::fig1());
    let q = oracle(&h, Field::Rational);
    assert_eq!(q, oracle(&h, Field::Prime(2)));
    assert_eq!(q, oracle(&h, Field::Prime(32749)));
    assert_eq!(q, betti_table_from_basis(&fixtures::fig1()).unwrap());
}

#[test]
fn table_invariant_examples() {
    let x1y1 = MonomialIdeal::new(1, [Monomial::all_variables(1)]).unwrap();
    let inv = invariants_from_table(&oracle(&x1y1, Field::Rational), 2);
    assert_eq!((inv.pd, inv.reg, inv.depth, inv.t), (1, 1, 1, 1));

    let k22 = edge_ideal(&graph_from_lattice(&fixtures::k22()));
    let inv = invariants_from_table(&oracle(&k22, Field::Rational), 4);
    assert_eq!((inv.pd, inv.reg, inv.depth, inv.t), (3, 1, 1, 1));
    assert_eq!(inv.totals, vec![1, 4, 4, 1]);

    let chain = edge_ideal(&graph_from_lattice(&fixtures::chain()));
    let inv = invariants_from_table(&oracle(&chain, Field::Rational), 4);
    assert_eq!((inv.pd, inv.reg, inv.depth, inv.t), (2, 1, 2, 2));
    assert_eq!(inv.totals, vec![1, 3, 2]);
}

#[test]
fn generators_are_the_degree_zero_part() {
    for l in fixtures::small() {
        let i = edge_ideal(&graph_from_lattice(&l));
        let t = oracle(&i, Field::Rational);
        let zero: Vec<Monomial> = t.entries().filter(|&(k, _, _)| k == 0).map(|(_, b, v)| {
            assert_eq!(v, 1);
            b
        }).collect();
        let mut gens = i.gens().to_vec();
        gens.sort();
        let mut zero = zero;
        zero.sort();
        assert_eq!(zero, gens);
    }
}

#[test]
fn terai_on_fixtures() {
    for l in fixtures::small() {
        let h = oracle(&hibi_ideal(&l), Field::Rational);
        let e = oracle(&edge_ideal(&graph_from_lattice(&l)), Field::Rational);
        assert_eq!(h.reg().unwrap(), e.to_quotient().pd().unwrap() as i64);
    }
}

#[test]
fn koszul_pair() {
    let m = |x: &[usize], y: &[usize]| {
        Monomial::new(SubsetMask::from_labels(2, x.iter().copied()).unwrap(), SubsetMask::from_labels(2, y.iter().copied()).unwrap())
    };
    let i = MonomialIdeal::new(2, [m(&[1], &[1]), m(&[2], &[2])]).unwrap();
    let t = oracle(&i, Field::Rational);
    assert_eq!(t.len(), 3);
    assert_eq!(t.get(1, &Monomial::all_variables(2)), 1);
}
