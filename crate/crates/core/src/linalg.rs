//! Exact matrix rank over the rationals or a prime field.
//!
//! Rational ranks use fraction-free integer elimination: a row is reduced
//! against a pivot row by cross-multiplying leading coefficients and then
//! dividing out the row content. Arithmetic runs in `i64` with overflow
//! checks and restarts in `BigInt` if a check fails.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedMul, CheckedSub, Signed};
use serde::{Serialize, Serializer};

/// Matrices with at most this many cells are eliminated densely.
pub const DENSE_CELL_LIMIT: usize = 10_000;

/// Coefficient field for rank computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Field {
    #[default]
    Rational,
    /// `GF(p)`; `p` must be a prime below `2^32`.
    Prime(u64),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "q"),
            Field::Prime(p) => write!(f, "p:{p}"),
        }
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for Field {
    type Err = String;

    /// `q` (or `Q`) for the rationals, `p:<prime>` for a prime field.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("q") {
            return Ok(Field::Rational);
        }
        let p = s
            .strip_prefix("p:")
            .ok_or_else(|| format!("unknown field {s:?}; use q or p:<prime>"))?;
        let p: u64 = p.parse().map_err(|_| format!("bad prime in {s:?}"))?;
        if p >= 1 << 32 || !is_prime(p) {
            return Err(format!("{p} is not a prime below 2^32"));
        }
        Ok(Field::Prime(p))
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A sparse integer matrix stored by rows; each row is sorted by column and
/// holds no zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn from_dense(dense: &[Vec<i64>]) -> Self {
        let rows = dense.len();
        let cols = dense.first().map_or(0, Vec::len);
        let mut m = SparseMatrix::new(rows, cols);
        for (r, row) in dense.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                m.add(r, c, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Adds `value` to entry `(r, c)`.
    pub fn add(&mut self, r: usize, c: usize, value: i64) {
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) out of range");
        let row = &mut self.data[r];
        match row.binary_search_by_key(&c, |&(k, _)| k) {
            Ok(pos) => {
                row[pos].1 += value;
                if row[pos].1 == 0 {
                    row.remove(pos);
                }
            }
            Err(pos) if value != 0 => row.insert(pos, (c, value)),
            Err(_) => {}
        }
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r]
            .binary_search_by_key(&c, |&(k, _)| k)
            .map_or(0, |pos| self.data[r][pos].1)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn row(&self, r: usize) -> &[(usize, i64)] {
        &self.data[r]
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.cols]; self.rows];
        for (r, row) in self.data.iter().enumerate() {
            for &(c, v) in row {
                d[r][c] = v;
            }
        }
        d
    }

    /// Exact rank over `field`, choosing dense or sparse elimination by size.
    pub fn rank(&self, field: Field) -> usize {
        if self.rows.saturating_mul(self.cols) <= DENSE_CELL_LIMIT {
            self.rank_dense(field)
        } else {
            self.rank_sparse(field)
        }
    }

    pub fn rank_dense(&self, field: Field) -> usize {
        match field {
            Field::Prime(p) => dense_rank_mod(self.to_dense(), p),
            Field::Rational => {
                let d = self.to_dense();
                dense_rank_integer::<i64>(convert_dense(&d)).unwrap_or_else(|| {
                    dense_rank_integer::<BigInt>(convert_dense(&d)).expect("bigint cannot overflow")
                })
            }
        }
    }

    pub fn rank_sparse(&self, field: Field) -> usize {
        match field {
            Field::Prime(p) => sparse_rank_mod(&self.data, p),
            Field::Rational => sparse_rank_integer::<i64>(convert_sparse(&self.data)).unwrap_or_else(|| {
                sparse_rank_integer::<BigInt>(convert_sparse(&self.data)).expect("bigint cannot overflow")
            }),
        }
    }
}

trait Exact: Integer + Signed + Clone + CheckedMul + CheckedSub + From<i64> {}
impl<T: Integer + Signed + Clone + CheckedMul + CheckedSub + From<i64>> Exact for T {}

fn convert_dense<T: Exact>(d: &[Vec<i64>]) -> Vec<Vec<T>> {
    d.iter().map(|row| row.iter().map(|&v| T::from(v)).collect()).collect()
}

fn convert_sparse<T: Exact>(d: &[Vec<(usize, i64)>]) -> Vec<Vec<(usize, T)>> {
    d.iter()
        .map(|row| row.iter().map(|&(c, v)| (c, T::from(v))).collect())
        .collect()
}

/// `a*x - b*y`, `None` on overflow.
fn cross<T: Exact>(a: &T, x: &T, b: &T, y: &T) -> Option<T> {
    a.checked_mul(x)?.checked_sub(&b.checked_mul(y)?)
}

fn dense_rank_integer<T: Exact>(mut m: Vec<Vec<T>>) -> Option<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        // smallest nonzero pivot keeps intermediate values small
        let pivot = (rank..rows)
            .filter(|&r| !m[r][c].is_zero())
            .min_by(|&a, &b| m[a][c].abs().cmp(&m[b][c].abs()));
        let Some(pr) = pivot else { continue };
        m.swap(rank, pr);
        let (top, rest) = m.split_at_mut(rank + 1);
        let prow = &top[rank];
        let a = prow[c].clone();
        for row in rest.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let b = row[c].clone();
            let g = a.gcd(&b);
            let (ma, mb) = (a.div_floor(&g), b.div_floor(&g));
            for k in c..cols {
                row[k] = cross(&ma, &row[k], &mb, &prow[k])?;
            }
            normalize_content(row.iter_mut());
        }
        rank += 1;
    }
    Some(rank)
}

fn normalize_content<'a, T: Exact + 'a, I: Iterator<Item = &'a mut T>>(values: I) {
    let mut refs: Vec<&mut T> = values.collect();
    let mut g = T::zero();
    for v in refs.iter() {
        g = g.gcd(v);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for v in refs.iter_mut() {
        **v = v.div_floor(&g);
    }
}

fn sparse_rank_integer<T: Exact>(rows: Vec<Vec<(usize, T)>>) -> Option<usize> {
    // pivots[c] = reduced row whose leading column is c
    let mut pivots: std::collections::HashMap<usize, Vec<(usize, T)>> = std::collections::HashMap::new();
    let mut order: Vec<Vec<(usize, T)>> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    order.sort_by_key(Vec::len);
    for mut row in order {
        loop {
            let Some((lead, _)) = row.first() else { break };
            let Some(p) = pivots.get(lead) else { break };
            let a = p[0].1.clone();
            let b = row[0].1.clone();
            let g = a.gcd(&b);
            let (ma, mb) = (a.div_floor(&g), b.div_floor(&g));
            row = sparse_combine(&row, &ma, p, &mb)?;
            let mut vals: Vec<T> = row.iter().map(|(_, v)| v.clone()).collect();
            normalize_content(vals.iter_mut());
            for (slot, v) in row.iter_mut().zip(vals) {
                slot.1 = v;
            }
        }
        if let Some(&(lead, _)) = row.first() {
            pivots.insert(lead, row);
        }
    }
    Some(pivots.len())
}

/// `ma*x - mb*y` on sorted sparse rows, dropping zeros.
fn sparse_combine<T: Exact>(
    x: &[(usize, T)],
    ma: &T,
    y: &[(usize, T)],
    mb: &T,
) -> Option<Vec<(usize, T)>> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    let zero = T::zero();
    while i < x.len() || j < y.len() {
        let cx = x.get(i).map_or(usize::MAX, |e| e.0);
        let cy = y.get(j).map_or(usize::MAX, |e| e.0);
        let (c, v) = if cx == cy {
            let v = cross(ma, &x[i].1, mb, &y[j].1)?;
            i += 1;
            j += 1;
            (cx, v)
        } else if cx < cy {
            let v = cross(ma, &x[i].1, mb, &zero)?;
            i += 1;
            (cx, v)
        } else {
            let v = cross(ma, &zero, mb, &y[j].1)?;
            j += 1;
            (cy, v)
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    Some(out)
}

fn to_mod(v: i64, p: u64) -> u64 {
    v.rem_euclid(p as i64) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

fn dense_rank_mod(d: Vec<Vec<i64>>, p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = d.iter().map(|r| r.iter().map(|&v| to_mod(v, p)).collect()).collect();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pr) = (rank..rows).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, pr);
        let inv = inv_mod(m[rank][c], p);
        let (top, rest) = m.split_at_mut(rank + 1);
        let prow = &top[rank];
        for row in rest.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            let factor = row[c] * inv % p;
            for k in c..cols {
                row[k] = (row[k] + p - factor * prow[k] % p) % p;
            }
        }
        rank += 1;
    }
    rank
}

fn sparse_rank_mod(data: &[Vec<(usize, i64)>], p: u64) -> usize {
    let mut pivots: std::collections::HashMap<usize, Vec<(usize, u64)>> = std::collections::HashMap::new();
    let mut order: Vec<Vec<(usize, u64)>> = data
        .iter()
        .map(|r| {
            r.iter()
                .map(|&(c, v)| (c, to_mod(v, p)))
                .filter(|&(_, v)| v != 0)
                .collect::<Vec<_>>()
        })
        .filter(|r| !r.is_empty())
        .collect();
    order.sort_by_key(Vec::len);
    for mut row in order {
        loop {
            let Some(&(lead, lv)) = row.first() else { break };
            let Some(prow) = pivots.get(&lead) else { break };
            // pivot rows are monic
            let factor = lv;
            let mut out = Vec::with_capacity(row.len() + prow.len());
            let (mut i, mut j) = (0, 0);
            while i < row.len() || j < prow.len() {
                let cx = row.get(i).map_or(usize::MAX, |e| e.0);
                let cy = prow.get(j).map_or(usize::MAX, |e| e.0);
                if cx == cy {
                    let v = (row[i].1 + p - factor * prow[j].1 % p) % p;
                    if v != 0 {
                        out.push((cx, v));
                    }
                    i += 1;
                    j += 1;
                } else if cx < cy {
                    out.push(row[i]);
                    i += 1;
                } else {
                    out.push((cy, (p - factor * prow[j].1 % p) % p));
                    j += 1;
                }
            }
            row = out;
        }
        if let Some(&(lead, lv)) = row.first() {
            let inv = inv_mod(lv, p);
            for e in row.iter_mut() {
                e.1 = e.1 * inv % p;
            }
            pivots.insert(lead, row);
        }
    }
    pivots.len()
}
