//! The property suite: every structural fact about a lattice and its
//! resolution, plus (at oracle level) every closed-form invariant checked
//! against upper-Koszul homology.
//!
//! Checks marked advisory record observations rather than requirements.
//! They never make a run fail.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::betti::{invariants_from_table, serialize_graded, BettiTable};
use crate::graph::{cover_lattice, graph_from_lattice};
use crate::ideal::{alexander_dual, edge_ideal, hibi_ideal, lcm_closure};
use crate::invariants::{
    cm_extremal_placement_check, extremal_graded_edge_ring, extremal_multigraded_edge_ring,
    extremal_multigraded_h, InvariantReport,
};
use crate::io::lattice_to_json;
use crate::lattice::{interval_within, meet_of, CoverLattice};
use crate::linalg::Field;
use crate::mask::SubsetMask;
use crate::oracle::{betti_oracle, OracleConfig, OracleError};
use crate::resolution::{
    betti_table_from_basis, build_resolution, expected_level_ranks, find_unit_entry, strand_exactness_over,
    verify_complex, ComplexViolation, ResolutionError,
};

/// Largest `|N(p)|` for which subsets of `N(p)` are enumerated.
pub const LEMMA_NEIGHBOR_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Formulas,
    Oracle,
}

/// Deliberate corruption of the constructed complex, to show the checks bite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// Flip the sign of the first entry of the highest nonzero differential.
    NegateDifferential,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub level: Level,
    pub field: Field,
    pub closure_cap: usize,
    pub mutation: Option<Mutation>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            level: Level::Oracle,
            field: Field::Rational,
            closure_cap: OracleConfig::default().closure_cap,
            mutation: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub property: &'static str,
    pub passed: bool,
    pub advisory: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

/// Formula values next to the oracle's.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleSummary {
    pub depth: (i64, i64),
    pub reg: (i64, i64),
    pub pd: (i64, i64),
    pub totals: Vec<u64>,
    pub t: u64,
    pub b_bound: usize,
    #[serde(serialize_with = "serialize_graded")]
    pub graded_formula: BTreeMap<(usize, usize), u64>,
    #[serde(serialize_with = "serialize_graded")]
    pub graded_oracle: BTreeMap<(usize, usize), u64>,
}

impl OracleSummary {
    /// Depth, regularity and projective dimension all agree.
    pub fn matches(&self) -> bool {
        self.depth.0 == self.depth.1 && self.reg.0 == self.reg.1 && self.pd.0 == self.pd.1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceVerdict {
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
}

impl InstanceVerdict {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || c.advisory)
    }

    pub fn check(&self, property: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.property == property)
    }
}

type Outcome = Result<(), Value>;

fn labels(v: &[SubsetMask]) -> Value {
    json!(v.iter().map(|p| p.labels()).collect::<Vec<_>>())
}

fn neighbors(l: &CoverLattice, i: usize) -> Vec<SubsetMask> {
    l.lower_indices(i).iter().map(|&k| l.element(k)).collect()
}

fn subset(v: &[SubsetMask], bits: u32) -> Vec<SubsetMask> {
    v.iter().enumerate().filter(|(k, _)| bits >> k & 1 == 1).map(|(_, &q)| q).collect()
}

/// Distinct subsets of `N(p)` have distinct meets.
pub fn lemma1_distinct_meets(l: &CoverLattice) -> Outcome {
    for (i, &p) in l.elements().iter().enumerate() {
        let nb = neighbors(l, i);
        if nb.len() > LEMMA_NEIGHBOR_CAP {
            continue;
        }
        let mut seen: BTreeMap<SubsetMask, u32> = BTreeMap::new();
        for bits in 0..1u32 << nb.len() {
            let m = meet_of(subset(&nb, bits), p);
            if let Some(&other) = seen.get(&m) {
                return Err(json!({"p": p.labels(), "S": labels(&subset(&nb, other)), "S'": labels(&subset(&nb, bits)), "meet": m.labels()}));
            }
            seen.insert(m, bits);
        }
    }
    Ok(())
}

/// `S ⊆ S' ⊆ N(p)` implies `|S'| - |S| <= |∧S| - |∧S'|`.
pub fn lemma1_cardinality(l: &CoverLattice) -> Outcome {
    for (i, &p) in l.elements().iter().enumerate() {
        let nb = neighbors(l, i);
        if nb.len() > LEMMA_NEIGHBOR_CAP {
            continue;
        }
        let full = (1u32 << nb.len()) - 1;
        for big in 0..=full {
            let mb = meet_of(subset(&nb, big), p);
            // enumerate sub ⊆ big
            let mut small = big;
            loop {
                let ms = meet_of(subset(&nb, small), p);
                let lhs = big.count_ones() as i64 - small.count_ones() as i64;
                let rhs = ms.len() as i64 - mb.len() as i64;
                if lhs > rhs {
                    return Err(json!({"p": p.labels(), "S": labels(&subset(&nb, small)), "S'": labels(&subset(&nb, big))}));
                }
                if small == 0 {
                    break;
                }
                small = (small - 1) & big;
            }
        }
    }
    Ok(())
}

/// For distinct `q, q' ∈ N(p)`: `q ∩ q' ∈ N(q)` and `[q ∩ q', p]` has four
/// elements.
pub fn rank_two(l: &CoverLattice) -> Outcome {
    for (i, &p) in l.elements().iter().enumerate() {
        let nb = neighbors(l, i);
        for (a, &q) in nb.iter().enumerate() {
            for &r in &nb[a + 1..] {
                let m = q.intersection(r);
                let qi = l.index_of(q).expect("neighbors are elements");
                let in_nq = neighbors(l, qi).contains(&m);
                let size = l.elements().iter().filter(|e| m.is_subset(**e) && e.is_subset(p)).count();
                if !in_nq || size != 4 {
                    return Err(json!({"p": p.labels(), "q": q.labels(), "r": r.labels(), "meet_is_neighbor": in_nq, "interval_size": size}));
                }
            }
        }
    }
    Ok(())
}

/// `p ∈ A_G` and `[∧N(q), q] ⊆ [∧N(p), p]` imply `f(q) <= f(p)`.
pub fn lemma2(l: &CoverLattice) -> Outcome {
    for pi in l.a_indices() {
        let outer = l.top_interval(pi);
        for qi in 0..l.len() {
            if l.element(qi).is_empty() {
                continue;
            }
            if interval_within(l.top_interval(qi), outer) && l.f_at(qi) > l.f_at(pi) {
                return Err(json!({"p": l.element(pi).labels(), "q": l.element(qi).labels(), "f_p": l.f_at(pi), "f_q": l.f_at(qi)}));
            }
        }
    }
    Ok(())
}

/// `Φ(p, S) = [∧S, p]` hits every Boolean interval exactly once.
pub fn phi_bijective(l: &CoverLattice) -> Outcome {
    let image = l.boolean_intervals();
    let expected: usize = (0..l.len()).map(|i| 1usize << l.lower_indices(i).len()).sum();
    let distinct: std::collections::BTreeSet<_> = image.iter().map(|(_, b)| *b).collect();
    let scan = l.boolean_intervals_scan();
    if image.len() != expected || distinct.len() != image.len() || distinct != scan {
        return Err(json!({
            "image": image.len(),
            "expected": expected,
            "distinct": distinct.len(),
            "scan": scan.len(),
        }));
    }
    Ok(())
}

pub fn round_trip(l: &CoverLattice) -> Outcome {
    let g = graph_from_lattice(l);
    match cover_lattice(&g) {
        Ok(back) if back == *l => Ok(()),
        Ok(back) => Err(json!({"got": lattice_to_json(&back)})),
        Err(e) => Err(json!({"error": e.to_string()})),
    }
}

pub fn duality(l: &CoverLattice) -> Outcome {
    let h = hibi_ideal(l);
    let e = edge_ideal(&graph_from_lattice(l));
    let dh = alexander_dual(&h).map_err(|err| json!({"error": err.to_string()}))?;
    let de = alexander_dual(&e).map_err(|err| json!({"error": err.to_string()}))?;
    if dh != e || de != h {
        return Err(json!({"dual_of_hibi": dh.to_string(), "edge_ideal": e.to_string(), "dual_of_edge": de.to_string()}));
    }
    Ok(())
}

fn check(property: &'static str, outcome: Outcome) -> Check {
    Check { property, passed: outcome.is_ok(), advisory: false, detail: outcome.err() }
}

fn advisory(property: &'static str, outcome: Outcome) -> Check {
    Check { advisory: true, ..check(property, outcome) }
}

/// Runs every property on one lattice.
pub fn verify_lattice(l: &CoverLattice, cfg: &VerifyConfig) -> Result<InstanceVerdict, VerifyError> {
    let mut checks = vec![
        check("lemma1_distinct_meets", lemma1_distinct_meets(l)),
        check("lemma1_cardinality", lemma1_cardinality(l)),
        check("rank_two", rank_two(l)),
        check("lemma2", lemma2(l)),
        check("phi_bijective", phi_bijective(l)),
        check("round_trip", round_trip(l)),
        check("duality", duality(l)),
    ];

    let mut res = build_resolution(l)?;
    if cfg.mutation == Some(Mutation::NegateDifferential) {
        if let Some(level) = (1..=res.complex.diffs.len()).rev().find(|&k| !res.complex.diffs[k - 1].is_empty()) {
            res.complex.negate_term(level, 0);
        }
    }
    let square = verify_complex(&res.complex).map_err(|v| {
        let label = |level: usize, k: usize| {
            let g = &res.levels[level][k];
            json!({"p": g.p.labels(), "S": labels(&g.s)})
        };
        match v {
            ComplexViolation::SquareNonzero { level, source, target } => {
                json!({"kind": "d^2", "level": level, "source": label(level, source), "target": label(level - 2, target)})
            }
            ComplexViolation::AugmentationNonzero { source } => {
                json!({"kind": "augmentation", "level": 1, "source": label(1, source)})
            }
            ComplexViolation::NotHomogeneous { level, source, target } => {
                json!({"kind": "homogeneity", "level": level, "source": label(level, source), "target": label(level - 1, target)})
            }
        }
    });
    checks.push(check("d_squared_zero", square));
    checks.push(check(
        "minimality",
        match find_unit_entry(&res.complex) {
            None => Ok(()),
            Some((level, t)) => Err(json!({"level": level, "source": t.source, "target": t.target})),
        },
    ));
    let ranks = res.level_ranks();
    let expected = expected_level_ranks(l);
    checks.push(check(
        "level_ranks",
        if ranks == expected { Ok(()) } else { Err(json!({"got": ranks, "expected": expected})) },
    ));
    let h = hibi_ideal(l);
    let strand_failure = lcm_closure(&h)
        .par_iter()
        .find_first(|b| !strand_exactness_over(&res.complex, &h, b, cfg.field))
        .copied();
    checks.push(check(
        "strand_exactness",
        match strand_failure {
            None => Ok(()),
            Some(b) => Err(json!({"multidegree": b.to_string()})),
        },
    ));
    let report = InvariantReport::from_lattice(l);
    checks.push(check(
        "report_identities",
        if report.pd_ri == 2 * report.n as i64 - report.depth_ri
            && report.pd_ri == report.reg_h
            && report.is_cm == (report.depth_ri == report.n as i64)
        {
            Ok(())
        } else {
            Err(json!({"report": report}))
        },
    ));

    if cfg.level == Level::Formulas {
        return Ok(InstanceVerdict { checks, oracle: None });
    }

    let ocfg = OracleConfig { field: cfg.field, closure_cap: cfg.closure_cap };
    let h_table = betti_oracle(&h, ocfg)?;
    let e = edge_ideal(&graph_from_lattice(l));
    let e_table = betti_oracle(&e, ocfg)?;
    let (checks_oracle, summary) = oracle_checks(l, &report, &h_table, &e, &e_table)?;
    checks.extend(checks_oracle);
    Ok(InstanceVerdict { checks, oracle: Some(summary) })
}

fn first_difference(a: &BettiTable, b: &BettiTable) -> Option<Value> {
    let left: BTreeMap<_, _> = a.entries().map(|(i, m, v)| ((i, m), v)).collect();
    let right: BTreeMap<_, _> = b.entries().map(|(i, m, v)| ((i, m), v)).collect();
    left.keys()
        .chain(right.keys())
        .find(|k| left.get(k) != right.get(k))
        .map(|&(i, m)| json!({"i": i, "deg": m.to_string(), "basis": left.get(&(i, m)), "oracle": right.get(&(i, m))}))
}

fn oracle_checks(
    l: &CoverLattice,
    report: &InvariantReport,
    h_table: &BettiTable,
    e: &crate::ideal::MonomialIdeal,
    e_table: &BettiTable,
) -> Result<(Vec<Check>, OracleSummary), VerifyError> {
    let n = l.n();
    let mut checks = Vec::new();

    let basis = betti_table_from_basis(l)?;
    checks.push(check(
        "betti_table_equality",
        match first_difference(&basis, h_table) {
            None => Ok(()),
            Some(d) => Err(d),
        },
    ));

    let inv = invariants_from_table(e_table, 2 * n);
    let summary = OracleSummary {
        depth: (report.depth_ri, inv.depth),
        reg: (report.reg_ri as i64, inv.reg),
        pd: (report.pd_ri, inv.pd as i64),
        totals: inv.totals.clone(),
        t: inv.t,
        b_bound: report.last_betti_lower_bound,
        graded_formula: report.extremal_ri_graded.clone(),
        graded_oracle: inv.extremal_graded.clone(),
    };
    checks.push(check(
        "formulas_vs_oracle",
        if summary.matches() { Ok(()) } else { Err(serde_json::to_value(&summary).expect("serializable")) },
    ));

    let h_reg = h_table.reg().unwrap_or(0);
    checks.push(check(
        "terai",
        if h_reg == inv.pd as i64 { Ok(()) } else { Err(json!({"reg_H": h_reg, "pd_RI": inv.pd})) },
    ));

    let mut formula_h: Vec<_> = extremal_multigraded_h(l).into_iter().map(|(i, b)| (i, b, 1u64)).collect();
    let mut oracle_h = h_table.extremal_multigraded();
    formula_h.sort();
    oracle_h.sort();
    let over_one = h_table.entries().find(|&(_, _, v)| v > 1);
    let not_i_extremal = h_table.i_extremal().len() != h_table.len();
    checks.push(check(
        "extremal_h",
        if formula_h == oracle_h && over_one.is_none() && !not_i_extremal {
            Ok(())
        } else {
            let show = |v: &[(usize, crate::ideal::Monomial, u64)]| {
                v.iter().map(|(i, b, x)| json!([i, b.to_string(), x])).collect::<Vec<_>>()
            };
            Err(json!({
                "formula": show(&formula_h),
                "oracle": show(&oracle_h),
                "entry_above_one": over_one.map(|(i, b, v)| json!([i, b.to_string(), v])),
                "all_i_extremal": !not_i_extremal,
            }))
        },
    ));

    let quotient = e_table.to_quotient();
    let bad_transfer = extremal_multigraded_edge_ring(l)
        .into_iter()
        .find(|&(i, b, v)| quotient.get(i, &b) != v);
    checks.push(check(
        "extremal_transfer",
        match bad_transfer {
            None => Ok(()),
            Some((i, b, _)) => Err(json!({"i": i, "deg": b.to_string(), "oracle": quotient.get(i, &b)})),
        },
    ));

    let graded = extremal_graded_edge_ring(l);
    checks.push(advisory(
        "graded_extremal",
        if graded == inv.extremal_graded {
            Ok(())
        } else {
            Err(serde_json::to_value(&summary).expect("serializable"))
        },
    ));

    let bound = report.last_betti_lower_bound as u64;
    checks.push(check(
        "last_betti_bound",
        if inv.t >= bound { Ok(()) } else { Err(json!({"t": inv.t, "B_G": bound})) },
    ));
    checks.push(advisory(
        "bound_tight",
        if inv.t == bound { Ok(()) } else { Err(json!({"t": inv.t, "B_G": bound})) },
    ));

    let cm = if report.is_cm != (inv.depth == n as i64) {
        Err(json!({"formula_cm": report.is_cm, "oracle_depth": inv.depth}))
    } else if report.is_cm {
        match cm_extremal_placement_check(e, e_table) {
            Ok(true) => Ok(()),
            Ok(false) => Err(json!({"pd": inv.pd, "extremal": inv.extremal_multigraded.iter().map(|(i, b, v)| json!([i, b.to_string(), v])).collect::<Vec<_>>()})),
            Err(err) => Err(json!({"error": err.to_string()})),
        }
    } else {
        Ok(())
    };
    checks.push(check("cm_placement", cm));
    Ok((checks, summary))
}

/// Per-property totals over a corpus.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Tally {
    pub checked: usize,
    pub failed: usize,
    pub advisory: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_counterexample: Option<Value>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Summary {
    pub instances: usize,
    pub oracle_matches: usize,
    pub properties: BTreeMap<&'static str, Tally>,
}

impl Summary {
    pub fn add(&mut self, index: usize, l: &CoverLattice, v: &InstanceVerdict) {
        self.instances += 1;
        if v.oracle.as_ref().is_some_and(OracleSummary::matches) {
            self.oracle_matches += 1;
        }
        for c in &v.checks {
            let t = self.properties.entry(c.property).or_default();
            t.checked += 1;
            t.advisory = c.advisory;
            if !c.passed {
                t.failed += 1;
                if t.first_counterexample.is_none() {
                    t.first_counterexample = Some(json!({
                        "instance": index,
                        "lattice": lattice_to_json(l),
                        "detail": c.detail,
                    }));
                }
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.properties.values().all(|t| t.failed == 0 || t.advisory)
    }

    /// The first non-advisory failure, if any.
    pub fn first_failure(&self) -> Option<(&'static str, &Value)> {
        self.properties
            .iter()
            .find(|(_, t)| t.failed > 0 && !t.advisory)
            .and_then(|(k, t)| t.first_counterexample.as_ref().map(|c| (*k, c)))
    }

    /// `PASS`/`FAIL`/`NOTE` lines, one per property.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (name, t) in &self.properties {
            let status = match (t.failed, t.advisory) {
                (0, _) => "PASS",
                (_, true) => "NOTE",
                _ => "FAIL",
            };
            out.push_str(&format!("{status} {name} ({}/{} ok)\n", t.checked - t.failed, t.checked));
        }
        out
    }
}

/// Verifies every lattice (in parallel) and merges in input order.
pub fn verify_all(lattices: &[CoverLattice], cfg: &VerifyConfig) -> Result<(Summary, Vec<InstanceVerdict>), VerifyError> {
    let verdicts: Vec<InstanceVerdict> =
        lattices.par_iter().map(|l| verify_lattice(l, cfg)).collect::<Result<_, _>>()?;
    let mut summary = Summary::default();
    for (k, (l, v)) in lattices.iter().zip(&verdicts).enumerate() {
        summary.add(k, l, v);
    }
    Ok((summary, verdicts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixtures_pass_at_oracle_level() {
        let (summary, _) = verify_all(&fixtures::small(), &VerifyConfig::default()).unwrap();
        assert!(summary.passed(), "{}", summary.render());
        assert_eq!(summary.oracle_matches, 4);
        assert_eq!(summary.properties["bound_tight"].failed, 0);
        assert_eq!(summary.properties["graded_extremal"].failed, 0);
    }

    #[test]
    fn fig1_passes_formula_level() {
        let cfg = VerifyConfig { level: Level::Formulas, ..VerifyConfig::default() };
        let v = verify_lattice(&fixtures::fig1(), &cfg).unwrap();
        assert!(v.passed(), "{:?}", v.checks);
    }

    #[test]
    fn mutation_fails_square() {
        let cfg = VerifyConfig { level: Level::Formulas, mutation: Some(Mutation::NegateDifferential), ..VerifyConfig::default() };
        let v = verify_lattice(&fixtures::b2(), &cfg).unwrap();
        let c = v.check("d_squared_zero").unwrap();
        assert!(!c.passed);
        let d = c.detail.as_ref().unwrap();
        assert_eq!(d["kind"], "d^2");
        assert_eq!(d["source"]["p"], json!([1, 2]));
    }

    #[test]
    fn lemmas_on_b3() {
        let b3 = crate::lattice::lattice_closure(3, (0..3).map(|k| SubsetMask::from_indices(3, [k]).unwrap())).unwrap();
        assert_eq!(b3.len(), 8);
        assert!(lemma1_distinct_meets(&b3).is_ok());
        assert!(lemma1_cardinality(&b3).is_ok());
        assert!(rank_two(&b3).is_ok());
        assert!(lemma2(&b3).is_ok());
        assert!(phi_bijective(&b3).is_ok());
    }
}
