//! Multigraded Betti tables, their graded views and the invariants that can
//! be read off a complete table.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::ideal::{Monomial, MonomialDoc};

/// Whether a table describes an ideal `I` or the quotient `R/I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subject {
    #[serde(rename = "ideal I")]
    Ideal,
    #[serde(rename = "quotient R/I")]
    Quotient,
}

/// `β_{i,b}` for every homological degree `i` and squarefree multidegree `b`.
/// Only nonzero entries are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiTable {
    n: usize,
    subject: Subject,
    entries: BTreeMap<(usize, Monomial), u64>,
}

impl BettiTable {
    pub fn new(n: usize, subject: Subject) -> Self {
        BettiTable { n, subject, entries: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn subject(&self) -> Subject {
        self.subject
    }

    /// Adds `value` to `β_{i,b}`.
    pub fn add(&mut self, i: usize, b: Monomial, value: u64) {
        if value == 0 {
            return;
        }
        *self.entries.entry((i, b)).or_insert(0) += value;
    }

    pub fn get(&self, i: usize, b: &Monomial) -> u64 {
        self.entries.get(&(i, *b)).copied().unwrap_or(0)
    }

    /// Nonzero entries in `(i, b)` order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, Monomial, u64)> + '_ {
        self.entries.iter().map(|(&(i, b), &v)| (i, b, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `β_{i,j} = Σ_{|b| = j} β_{i,b}`.
    pub fn graded(&self) -> BTreeMap<(usize, usize), u64> {
        let mut g = BTreeMap::new();
        for (i, b, v) in self.entries() {
            *g.entry((i, b.degree())).or_insert(0) += v;
        }
        g
    }

    /// Total Betti numbers `β_0, β_1, …, β_pd`.
    pub fn totals(&self) -> Vec<u64> {
        let Some(pd) = self.pd() else { return Vec::new() };
        let mut t = vec![0; pd + 1];
        for (i, _, v) in self.entries() {
            t[i] += v;
        }
        t
    }

    /// Largest homological degree with a nonzero entry.
    pub fn pd(&self) -> Option<usize> {
        self.entries.keys().map(|&(i, _)| i).max()
    }

    /// `max (|b| - i)` over nonzero entries.
    pub fn reg(&self) -> Option<i64> {
        self.entries.keys().map(|&(i, b)| b.degree() as i64 - i as i64).max()
    }

    /// The same resolution viewed as resolving `R/I`: `β_{i+1,b}(R/I) =
    /// β_{i,b}(I)` and `β_{0,1}(R/I) = 1`.
    pub fn to_quotient(&self) -> BettiTable {
        match self.subject {
            Subject::Quotient => self.clone(),
            Subject::Ideal => {
                let mut q = BettiTable::new(self.n, Subject::Quotient);
                q.add(0, Monomial::one(self.n), 1);
                for (i, b, v) in self.entries() {
                    q.add(i + 1, b, v);
                }
                q
            }
        }
    }

    /// Inverse of [`BettiTable::to_quotient`]; the unit entry is dropped.
    pub fn to_ideal(&self) -> BettiTable {
        match self.subject {
            Subject::Ideal => self.clone(),
            Subject::Quotient => {
                let mut t = BettiTable::new(self.n, Subject::Ideal);
                for (i, b, v) in self.entries() {
                    if i > 0 {
                        t.add(i - 1, b, v);
                    }
                }
                t
            }
        }
    }

    /// Nonzero `β_{i,b}` with no nonzero `β_{j,c}` such that `j >= i`, `b`
    /// strictly divides `c` and `|c| - |b| >= j - i`.
    pub fn extremal_multigraded(&self) -> Vec<(usize, Monomial, u64)> {
        let all: Vec<(usize, Monomial, u64)> = self.entries().collect();
        all.iter()
            .copied()
            .filter(|&(i, b, _)| {
                !all.iter().any(|&(j, c, _)| {
                    j >= i && b.strictly_divides(&c) && c.degree() - b.degree() >= j - i
                })
            })
            .collect()
    }

    /// Nonzero `β_{i,b}` with no nonzero `β_{i,c}` for `b` strictly dividing `c`.
    pub fn i_extremal(&self) -> Vec<(usize, Monomial, u64)> {
        let all: Vec<(usize, Monomial, u64)> = self.entries().collect();
        all.iter()
            .copied()
            .filter(|&(i, b, _)| !all.iter().any(|&(j, c, _)| j == i && b.strictly_divides(&c)))
            .collect()
    }

    /// Nonzero graded `β_{i,r}` with no nonzero `β_{j,l}` such that `j >= i`,
    /// `l > r` and `l - r >= j - i`. Keyed by `(i, r)`.
    pub fn extremal_graded(&self) -> BTreeMap<(usize, usize), u64> {
        let g = self.graded();
        g.iter()
            .filter(|&(&(i, r), _)| {
                !g.keys().any(|&(j, l)| j >= i && l > r && l - r >= j - i)
            })
            .map(|(&k, &v)| (k, v))
            .collect()
    }

    /// Betti diagram: columns are homological degrees `i`, rows are `j - i`
    /// where `j` is the total degree.
    pub fn render_diagram(&self) -> String {
        self.render_diagram_marked(&BTreeSet::new())
    }

    /// Like [`BettiTable::render_diagram`], with a `*` after each entry whose
    /// graded position `(i, j)` is in `marks`.
    pub fn render_diagram_marked(&self, marks: &BTreeSet<(usize, usize)>) -> String {
        let g = self.graded();
        let mut out = String::new();
        let Some(pd) = self.pd() else {
            out.push_str("(zero)\n");
            return out;
        };
        let rows: BTreeSet<i64> = g.keys().map(|&(i, j)| j as i64 - i as i64).collect();
        let totals = self.totals();
        let mark_any = !marks.is_empty();
        let cell = |v: Option<u64>, marked: bool| {
            let base = v.map_or(".".to_string(), |v| v.to_string());
            if marked {
                format!("{base}*")
            } else if mark_any {
                format!("{base} ")
            } else {
                base
            }
        };
        let mut width = vec![1usize; pd + 1];
        for i in 0..=pd {
            width[i] = width[i].max(i.to_string().len()).max(totals[i].to_string().len() + mark_any as usize);
            for (&(ci, j), &v) in &g {
                if ci == i {
                    width[i] = width[i].max(cell(Some(v), marks.contains(&(ci, j))).len());
                }
            }
        }
        let label_w = rows
            .iter()
            .map(|r| format!("{r}:").len())
            .max()
            .unwrap_or(2)
            .max("total:".len());
        let _ = write!(out, "{:>label_w$}", "");
        for i in 0..=pd {
            let _ = write!(out, " {:>w$}", i, w = width[i]);
        }
        out.push('\n');
        let _ = write!(out, "{:>label_w$}", "total:");
        for i in 0..=pd {
            let _ = write!(out, " {:>w$}", cell(Some(totals[i]), false), w = width[i]);
        }
        out.push('\n');
        for &r in &rows {
            let _ = write!(out, "{:>label_w$}", format!("{r}:"));
            for i in 0..=pd {
                let j = i as i64 + r;
                let v = (j >= 0).then(|| g.get(&(i, j as usize)).copied()).flatten();
                let marked = j >= 0 && marks.contains(&(i, j as usize));
                let _ = write!(out, " {:>w$}", cell(v, marked), w = width[i]);
            }
            out.push('\n');
        }
        out
    }
}

/// Invariants of `R/I` read from a complete table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableInvariants {
    pub pd: usize,
    pub reg: i64,
    pub depth: i64,
    pub totals: Vec<u64>,
    pub extremal_multigraded: Vec<(usize, Monomial, u64)>,
    #[serde(serialize_with = "serialize_graded")]
    pub extremal_graded: BTreeMap<(usize, usize), u64>,
    /// Last nonzero total Betti number.
    pub t: u64,
}

/// Reads `pd`, `reg`, depth (via Auslander–Buchsbaum in `ambient_vars`
/// variables), totals, extremal entries and `t` from a table. Ideal tables
/// are shifted to the quotient first.
pub fn invariants_from_table(table: &BettiTable, ambient_vars: usize) -> TableInvariants {
    let q = table.to_quotient();
    let pd = q.pd().unwrap_or(0);
    let totals = q.totals();
    TableInvariants {
        pd,
        reg: q.reg().unwrap_or(0),
        depth: ambient_vars as i64 - pd as i64,
        t: totals.last().copied().unwrap_or(0),
        totals,
        extremal_multigraded: q.extremal_multigraded(),
        extremal_graded: q.extremal_graded(),
    }
}

pub(crate) fn serialize_graded<S: serde::Serializer>(
    map: &BTreeMap<(usize, usize), u64>,
    s: S,
) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Pos {
        i: usize,
        j: usize,
        value: u64,
    }
    let v: Vec<Pos> = map.iter().map(|(&(i, j), &value)| Pos { i, j, value }).collect();
    v.serialize(s)
}

#[derive(Serialize, Deserialize)]
struct EntryDoc {
    i: usize,
    deg: MonomialDoc,
    value: u64,
}

#[derive(Serialize, Deserialize)]
struct TableDoc {
    n: usize,
    subject: Subject,
    entries: Vec<EntryDoc>,
}

impl Serialize for BettiTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TableDoc {
            n: self.n,
            subject: self.subject,
            entries: self
                .entries()
                .map(|(i, b, value)| EntryDoc {
                    i,
                    deg: MonomialDoc { x: b.x.labels(), y: b.y.labels() },
                    value,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BettiTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = TableDoc::deserialize(d)?;
        let mut t = BettiTable::new(doc.n, doc.subject);
        for e in doc.entries {
            let b = e
                .deg
                .into_monomial(doc.n)
                .ok_or_else(|| serde::de::Error::custom("multidegree out of range"))?;
            t.add(e.i, b, e.value);
        }
        Ok(t)
    }
}
