//! Integer matrices: Smith normal form, invariant factors, ranks over ℚ and 𝔽_p.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Column-major sparse integer matrix.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    /// Each column lists `(row, value)` with distinct rows and non-zero values.
    pub cols: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols: vec![Vec::new(); cols] }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn from_dense(m: &[Vec<i64>]) -> Self {
        let rows = m.len();
        let ncols = m.first().map_or(0, Vec::len);
        let mut cols = vec![Vec::new(); ncols];
        for (i, row) in m.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    cols[j].push((i, v));
                }
            }
        }
        SparseMatrix { rows, cols }
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.ncols()]; self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, v) in col {
                out[i][j] = BigInt::from(v);
            }
        }
        out
    }

    /// `self * other`, with entries as `i128` so the product of two boundary maps cannot overflow.
    pub fn mul(&self, other: &SparseMatrix) -> Vec<HashMap<usize, i128>> {
        other
            .cols
            .iter()
            .map(|col| {
                let mut acc: HashMap<usize, i128> = HashMap::new();
                for &(k, b) in col {
                    for &(i, a) in &self.cols[k] {
                        *acc.entry(i).or_insert(0) += a as i128 * b as i128;
                    }
                }
                acc.retain(|_, v| *v != 0);
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// Non-zero invariant factors in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        match sparse_unit_elimination(self) {
            Some((units, rest)) => {
                let mut out = vec![BigInt::one(); units];
                out.extend(dense_invariant_factors(rest));
                out
            }
            None => dense_invariant_factors(self.to_dense()),
        }
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// Rank over ℚ by fraction-free elimination.
    pub fn rank_q(&self) -> usize {
        let mut pivots: HashMap<usize, Vec<(usize, BigInt)>> = HashMap::new();
        let mut rank = 0;
        for col in &self.cols {
            let mut v: Vec<(usize, BigInt)> = col.iter().map(|&(i, x)| (i, BigInt::from(x))).collect();
            v.sort_by_key(|e| e.0);
            loop {
                let Some((lead, a)) = v.first().cloned() else { break };
                let Some(p) = pivots.get(&lead) else {
                    pivots.insert(lead, v);
                    rank += 1;
                    break;
                };
                let b = p[0].1.clone();
                v = combine_big(&v, &b, p, &a);
            }
        }
        rank
    }

    /// Rank over the field with `p` elements (`p` prime, below 2^31).
    pub fn rank_mod_p(&self, p: u64) -> usize {
        let red = |x: i64| x.rem_euclid(p as i64) as u64;
        let mut pivots: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
        let mut rank = 0;
        for col in &self.cols {
            let mut v: Vec<(usize, u64)> = col.iter().map(|&(i, x)| (i, red(x))).filter(|e| e.1 != 0).collect();
            v.sort_by_key(|e| e.0);
            loop {
                let Some(&(lead, a)) = v.first() else { break };
                let Some(pv) = pivots.get(&lead) else {
                    let inv = mod_pow(a, p - 2, p);
                    pivots.insert(lead, v.iter().map(|&(i, x)| (i, x * inv % p)).collect());
                    rank += 1;
                    break;
                };
                // pivot rows are normalised to lead 1: v -= a * pv
                let mut merged = Vec::with_capacity(v.len() + pv.len());
                let (mut i, mut j) = (0, 0);
                while i < v.len() || j < pv.len() {
                    let take_v = j >= pv.len() || (i < v.len() && v[i].0 < pv[j].0);
                    let take_p = i >= v.len() || (j < pv.len() && pv[j].0 < v[i].0);
                    let (row, x) = if take_v {
                        i += 1;
                        (v[i - 1].0, v[i - 1].1)
                    } else if take_p {
                        j += 1;
                        (pv[j - 1].0, (p - a * pv[j - 1].1 % p) % p)
                    } else {
                        i += 1;
                        j += 1;
                        (v[i - 1].0, (v[i - 1].1 + p - a * pv[j - 1].1 % p) % p)
                    };
                    if x != 0 {
                        merged.push((row, x));
                    }
                }
                v = merged;
            }
        }
        rank
    }
}

/// `b*v - a*p`, divided by its content.
fn combine_big(v: &[(usize, BigInt)], b: &BigInt, p: &[(usize, BigInt)], a: &BigInt) -> Vec<(usize, BigInt)> {
    let mut out: Vec<(usize, BigInt)> = Vec::with_capacity(v.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < p.len() {
        let (row, x) = if j >= p.len() || (i < v.len() && v[i].0 < p[j].0) {
            i += 1;
            (v[i - 1].0, b * &v[i - 1].1)
        } else if i >= v.len() || p[j].0 < v[i].0 {
            j += 1;
            (p[j - 1].0, -(a * &p[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (v[i - 1].0, b * &v[i - 1].1 - a * &p[j - 1].1)
        };
        if !x.is_zero() {
            out.push((row, x));
        }
    }
    let g = out.iter().fold(BigInt::zero(), |g, e| g.gcd(&e.1));
    if !g.is_zero() && !g.is_one() {
        for e in &mut out {
            e.1 = &e.1 / &g;
        }
    }
    out
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Repeatedly pivot on entries `±1`, each contributing an invariant factor 1. Returns the
/// number of unit pivots and the dense remainder, or `None` on `i64` overflow.
fn sparse_unit_elimination(m: &SparseMatrix) -> Option<(usize, Vec<Vec<BigInt>>)> {
    let mut cols: Vec<Option<HashMap<usize, i64>>> =
        m.cols.iter().map(|c| Some(c.iter().copied().collect())).collect();
    let mut rows: HashMap<usize, HashSet<usize>> = HashMap::new();
    for (j, c) in m.cols.iter().enumerate() {
        for &(i, _) in c {
            rows.entry(i).or_default().insert(j);
        }
    }
    let mut units = 0;
    loop {
        let mut order: Vec<(usize, usize)> =
            cols.iter().enumerate().filter_map(|(j, c)| c.as_ref().map(|c| (c.len(), j))).collect();
        order.sort_unstable();
        let mut progressed = false;
        for (_, j) in order {
            let Some(col) = cols[j].as_ref() else { continue };
            let pivot = col
                .iter()
                .filter(|(_, v)| v.abs() == 1)
                .map(|(&i, &v)| (rows[&i].len(), i, v))
                .min();
            let Some((_, r, pv)) = pivot else { continue };
            let col_j = cols[j].take().expect("alive");
            let others: Vec<usize> = rows[&r].iter().copied().filter(|&k| k != j).collect();
            for k in others {
                let ck = cols[k].as_mut().expect("alive");
                let factor = ck[&r].checked_mul(pv)?;
                for (&i, &v) in &col_j {
                    let cur = ck.get(&i).copied().unwrap_or(0);
                    let new = cur.checked_sub(factor.checked_mul(v)?)?;
                    if new == 0 {
                        ck.remove(&i);
                        rows.get_mut(&i).expect("row").remove(&k);
                    } else {
                        ck.insert(i, new);
                        rows.entry(i).or_default().insert(k);
                    }
                }
            }
            for &i in col_j.keys() {
                rows.get_mut(&i).expect("row").remove(&j);
            }
            rows.remove(&r);
            units += 1;
            progressed = true;
        }
        if !progressed {
            break;
        }
    }
    let live: Vec<&HashMap<usize, i64>> = cols.iter().flatten().filter(|c| !c.is_empty()).collect();
    let mut row_ids: Vec<usize> = live.iter().flat_map(|c| c.keys().copied()).collect();
    row_ids.sort_unstable();
    row_ids.dedup();
    let pos: HashMap<usize, usize> = row_ids.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let mut dense = vec![vec![BigInt::zero(); live.len()]; row_ids.len()];
    for (j, c) in live.iter().enumerate() {
        for (&i, &v) in c.iter() {
            dense[pos[&i]][j] = BigInt::from(v);
        }
    }
    Some((units, dense))
}

fn dense_invariant_factors(m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let (d, _, _) = snf_impl(m, false);
    let n = d.len().min(d.first().map_or(0, Vec::len));
    (0..n).map(|i| d[i][i].clone()).filter(|x| !x.is_zero()).collect()
}

/// Result of [`smith_normal_form`]: `p * m * q = d`, with `p`, `q` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub d: Vec<Vec<BigInt>>,
    pub p: Vec<Vec<BigInt>>,
    pub q: Vec<Vec<BigInt>>,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.len().min(self.d.first().map_or(0, Vec::len));
        (0..n).map(|i| self.d[i][i].clone()).collect()
    }
}

pub fn smith_normal_form(m: &[Vec<BigInt>]) -> SmithForm {
    let (d, p, q) = snf_impl(m.to_vec(), true);
    SmithForm { d, p: p.expect("tracked"), q: q.expect("tracked") }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

type Dense = Vec<Vec<BigInt>>;

fn snf_impl(mut a: Dense, track: bool) -> (Dense, Option<Dense>, Option<Dense>) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut p = track.then(|| identity(rows));
    let mut q = track.then(|| identity(cols));

    // row_i += k * row_j
    fn row_add(a: &mut Dense, p: &mut Option<Dense>, i: usize, j: usize, k: &BigInt) {
        for m in std::iter::once(a).chain(p.as_mut()) {
            let src = m[j].clone();
            for (x, y) in m[i].iter_mut().zip(&src) {
                *x += k * y;
            }
        }
    }
    // col_i += k * col_j
    fn col_add(a: &mut Dense, q: &mut Option<Dense>, i: usize, j: usize, k: &BigInt) {
        for m in std::iter::once(a).chain(q.as_mut()) {
            for row in m.iter_mut() {
                let y = row[j].clone();
                row[i] += k * y;
            }
        }
    }

    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero() && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return (a, p, q);
            };
            a.swap(t, bi);
            if let Some(p) = p.as_mut() {
                p.swap(t, bi);
            }
            for m in std::iter::once(&mut a).chain(q.as_mut()) {
                for row in m.iter_mut() {
                    row.swap(t, bj);
                }
            }
            let pivot = a[t][t].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let k = -(&a[i][t] / &pivot);
                    row_add(&mut a, &mut p, i, t, &k);
                    dirty |= !a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let k = -(&a[t][j] / &pivot);
                    col_add(&mut a, &mut q, j, t, &k);
                    dirty |= !a[t][j].is_zero();
                }
            }
            if dirty {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &pivot).is_zero()));
            match bad {
                Some(i) => row_add(&mut a, &mut p, t, i, &BigInt::one()),
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for m in std::iter::once(&mut a).chain(p.as_mut()) {
                for x in m[t].iter_mut() {
                    *x = -x.clone();
                }
            }
        }
    }
    (a, p, q)
}

/// Product of dense matrices.
pub fn dense_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..n).map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum()).collect())
        .collect()
}
