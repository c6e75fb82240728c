//! Exact integral cellular homology of finite cube complexes.
//!
//! A [`Cell`] is a cube given by its corner ids in mask order, so a `d`-cell has `2^d`
//! corners and the face `x_i = b` consists of the corners whose mask has bit `i` equal to
//! `b`. Boundaries use the cubical sign `(-1)^i` on the face `x_i = 1` and `-(-1)^i` on the
//! face `x_i = 0`, corrected by the orientation of the stored face relative to the induced
//! one. The corrected signs make `∂∂ = 0` independently of how faces list their corners.

mod matrix;

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::SimplicialComplex;
use crate::salvetti::CubeBall;

pub use matrix::{dense_mul, smith_normal_form, SmithForm, SparseMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub corners: Vec<usize>,
}

impl Cell {
    pub fn dim(&self) -> usize {
        self.corners.len().trailing_zeros() as usize
    }

    fn key(&self) -> Vec<usize> {
        let mut k = self.corners.clone();
        k.sort_unstable();
        k
    }
}

/// A finite list of cubes. Vertices must be listed as 0-cells.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CellComplex {
    cells: Vec<Cell>,
}

impl CellComplex {
    pub fn new(cells: Vec<Cell>) -> Self {
        CellComplex { cells }
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.cells.iter().map(Cell::dim).max()
    }

    pub fn counts(&self) -> Vec<usize> {
        let mut out = vec![0; self.dimension().map_or(0, |d| d + 1)];
        for c in &self.cells {
            out[c.dim()] += 1;
        }
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts().iter().enumerate().map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
    }

    /// Reads `{"cubes": [...]}` (as written by ball export) or `{"cells": [[...], ...]}`.
    /// A cube is either a corner list in mask order, an object with `corners`, or an object
    /// with only `verts`; in the last case the mask order is recovered from the edges of the
    /// complex. Missing vertices are added as 0-cells.
    pub fn from_json(v: &Value) -> Result<Self> {
        let list = v
            .get("cubes")
            .or_else(|| v.get("cells"))
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Config("expected a `cubes` or `cells` array".into()))?;
        let ids = |x: &Value| -> Result<Vec<usize>> {
            x.as_array()
                .ok_or_else(|| Error::Config("cell is not a list of vertex ids".into()))?
                .iter()
                .map(|i| i.as_u64().map(|i| i as usize).ok_or_else(|| Error::Config("vertex id is not a natural".into())))
                .collect()
        };
        let mut ordered = Vec::new();
        let mut unordered = Vec::new();
        for item in list {
            if item.is_array() {
                ordered.push(ids(item)?);
            } else if let Some(c) = item.get("corners") {
                ordered.push(ids(c)?);
            } else if let Some(c) = item.get("verts") {
                unordered.push(ids(c)?);
            } else {
                return Err(Error::Config("cube has neither `corners` nor `verts`".into()));
            }
        }
        let mut cells: Vec<Vec<usize>> = ordered;
        let mut adjacency: HashMap<usize, Vec<usize>> = HashMap::new();
        for c in cells.iter().chain(&unordered).filter(|c| c.len() == 2) {
            adjacency.entry(c[0]).or_default().push(c[1]);
            adjacency.entry(c[1]).or_default().push(c[0]);
        }
        for verts in unordered {
            cells.push(mask_order(&verts, &adjacency)?);
        }
        for c in &cells {
            if !c.len().is_power_of_two() {
                return Err(Error::Config(format!("cell {c:?} does not have 2^d corners")));
            }
        }
        let mut present: std::collections::HashSet<usize> =
            cells.iter().filter(|c| c.len() == 1).map(|c| c[0]).collect();
        let all: Vec<usize> = cells.iter().flatten().copied().collect();
        for v in all {
            if present.insert(v) {
                cells.push(vec![v]);
            }
        }
        Ok(CellComplex::new(cells.into_iter().map(|corners| Cell { corners }).collect()))
    }
}

/// Mask order of a cube given by its vertex set, using the edges among those vertices.
fn mask_order(verts: &[usize], adjacency: &HashMap<usize, Vec<usize>>) -> Result<Vec<usize>> {
    let n = verts.len();
    if n <= 2 {
        return Ok(verts.to_vec());
    }
    let bad = || Error::Config(format!("cannot recover the cube structure of {verts:?} from its edges"));
    let inside = |v: &usize| verts.contains(v);
    let base = verts[0];
    let dirs: Vec<usize> = adjacency.get(&base).map_or(vec![], |a| a.iter().copied().filter(inside).collect());
    if !n.is_power_of_two() || 1 << dirs.len() != n {
        return Err(bad());
    }
    let mut mask: HashMap<usize, usize> = HashMap::from([(base, 0)]);
    for (i, &d) in dirs.iter().enumerate() {
        mask.insert(d, 1 << i);
    }
    let mut frontier: Vec<usize> = dirs.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &v in &frontier {
            for &w in adjacency.get(&v).into_iter().flatten().filter(|w| inside(w)) {
                if mask.contains_key(&w) {
                    continue;
                }
                let m: usize = adjacency[&w].iter().filter_map(|u| mask.get(u)).fold(0, |a, b| a | b);
                mask.insert(w, m);
                next.push(w);
            }
        }
        frontier = next;
    }
    let mut out = vec![usize::MAX; n];
    for (&v, &m) in &mask {
        if m >= n || out[m] != usize::MAX {
            return Err(bad());
        }
        out[m] = v;
    }
    if out.contains(&usize::MAX) {
        return Err(bad());
    }
    Ok(out)
}

/// Boundary matrices `∂_d: C_d -> C_{d-1}` for `d >= 1`; `boundaries[0]` is the zero map
/// out of `C_0`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    /// `cells[d]` lists indices into the source complex, in the order of the basis of `C_d`.
    pub cells: Vec<Vec<usize>>,
    pub boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    pub fn rank(&self, d: usize) -> usize {
        self.cells.get(d).map_or(0, Vec::len)
    }

    pub fn top_degree(&self) -> Option<usize> {
        self.cells.len().checked_sub(1)
    }

    /// Exact check of `∂_{d-1} ∂_d = 0` in every degree.
    pub fn check_d_squared(&self) -> bool {
        (2..self.boundaries.len())
            .all(|d| self.boundaries[d - 1].mul(&self.boundaries[d]).iter().all(HashMap::is_empty))
    }
}

/// Sign of the hypercube symmetry sending the induced face (mask order `induced`) to the
/// stored face `stored`. Returns `None` if the two corner lists are not the same cube.
fn relative_orientation(induced: &[usize], stored: &[usize]) -> Option<i64> {
    let pos: HashMap<usize, usize> = stored.iter().enumerate().map(|(m, &v)| (v, m)).collect();
    let c0 = *pos.get(&induced[0])?;
    let d = induced.len().trailing_zeros() as usize;
    let mut perm = Vec::with_capacity(d);
    for j in 0..d {
        let m = pos.get(&induced[1 << j])? ^ c0;
        if !m.is_power_of_two() {
            return None;
        }
        perm.push(m.trailing_zeros() as usize);
    }
    for (mi, &v) in induced.iter().enumerate() {
        let image = perm.iter().enumerate().filter(|(j, _)| mi >> j & 1 == 1).fold(c0, |a, (_, &p)| a ^ (1 << p));
        if stored.get(image) != Some(&v) {
            return None;
        }
    }
    let inversions = (0..d).flat_map(|a| (a + 1..d).map(move |b| (a, b))).filter(|&(a, b)| perm[a] > perm[b]).count();
    let sign = if (inversions + c0.count_ones() as usize) % 2 == 0 { 1 } else { -1 };
    Some(sign)
}

pub fn chain_complex(complex: &CellComplex) -> Result<ChainComplex> {
    let top = match complex.dimension() {
        Some(d) => d,
        None => return Ok(ChainComplex { cells: vec![], boundaries: vec![] }),
    };
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
    let mut index: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
    for (i, c) in complex.cells.iter().enumerate() {
        if !c.corners.len().is_power_of_two() {
            return Err(Error::Config(format!("cell {:?} does not have 2^d corners", c.corners)));
        }
        let d = c.dim();
        if index.insert(c.key(), (d, cells[d].len())).is_some() {
            return Err(Error::Config(format!("cell {:?} listed twice", c.corners)));
        }
        cells[d].push(i);
    }
    let mut boundaries = vec![SparseMatrix::zeros(0, cells[0].len())];
    for d in 1..=top {
        let mut m = SparseMatrix::zeros(cells[d - 1].len(), cells[d].len());
        for (col, &ci) in cells[d].iter().enumerate() {
            let c = &complex.cells[ci].corners;
            let mut entries: BTreeMap<usize, i64> = BTreeMap::new();
            for i in 0..d {
                for b in 0..2 {
                    let face: Vec<usize> = (0..c.len()).filter(|m| m >> i & 1 == b).map(|m| c[m]).collect();
                    let mut key = face.clone();
                    key.sort_unstable();
                    let &(fd, row) = index
                        .get(&key)
                        .ok_or_else(|| Error::NonClosedComplex(format!("face {face:?} of cell {c:?} is missing")))?;
                    debug_assert_eq!(fd, d - 1);
                    let orient = relative_orientation(&face, &complex.cells[cells[d - 1][row]].corners)
                        .ok_or_else(|| Error::NonClosedComplex(format!("face {face:?} of {c:?} is not a cube")))?;
                    let base = if i % 2 == 0 { 1 } else { -1 };
                    let sign = if b == 1 { base } else { -base };
                    *entries.entry(row).or_insert(0) += sign * orient;
                }
            }
            m.cols[col] = entries.into_iter().filter(|&(_, v)| v != 0).collect();
        }
        boundaries.push(m);
    }
    let cc = ChainComplex { cells, boundaries };
    debug_assert!(cc.check_d_squared());
    Ok(cc)
}

/// Chain complex of a simplicial complex with the alternating face signs; simplices are
/// sorted vertex lists and form the basis in ascending order.
pub fn simplicial_chain_complex(k: &SimplicialComplex) -> Result<ChainComplex> {
    let dim = k.dimension();
    if dim < 0 {
        return Ok(ChainComplex { cells: vec![], boundaries: vec![] });
    }
    let top = dim as usize;
    let mut by_dim: Vec<Vec<&Vec<usize>>> = vec![Vec::new(); top + 1];
    for s in &k.simplices {
        by_dim[s.len() - 1].push(s);
    }
    let index: HashMap<&Vec<usize>, usize> =
        by_dim.iter().flat_map(|l| l.iter().enumerate().map(|(i, &s)| (s, i))).collect();
    let mut cells = Vec::with_capacity(top + 1);
    let mut offset = 0;
    for l in &by_dim {
        cells.push((offset..offset + l.len()).collect());
        offset += l.len();
    }
    let mut boundaries = vec![SparseMatrix::zeros(0, by_dim[0].len())];
    for d in 1..=top {
        let mut m = SparseMatrix::zeros(by_dim[d - 1].len(), by_dim[d].len());
        for (col, s) in by_dim[d].iter().enumerate() {
            for i in 0..s.len() {
                let mut f = (*s).clone();
                f.remove(i);
                let row = *index.get(&f).ok_or_else(|| Error::NonClosedComplex(format!("face {f:?} missing")))?;
                m.cols[col].push((row, if i % 2 == 0 { 1 } else { -1 }));
            }
            m.cols[col].sort_unstable();
        }
        boundaries.push(m);
    }
    Ok(ChainComplex { cells, boundaries })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeHomology {
    pub betti: usize,
    /// Torsion coefficients, each greater than 1, in divisibility order.
    pub torsion: Vec<BigInt>,
}

impl DegreeHomology {
    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyResult {
    pub reduced: bool,
    /// Degrees `0..=top` of the complex.
    pub degrees: Vec<DegreeHomology>,
    /// Set for the empty complex, whose reduced homology is `ℤ` in degree `-1`.
    pub empty: bool,
}

impl HomologyResult {
    pub fn betti(&self, d: usize) -> usize {
        self.degrees.get(d).map_or(0, |h| h.betti)
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        self.degrees.iter().map(|h| h.betti).collect()
    }

    pub fn to_json(&self) -> Value {
        let degrees: Vec<Value> = self
            .degrees
            .iter()
            .enumerate()
            .map(|(d, h)| {
                let torsion: Vec<Value> =
                    h.torsion.iter().map(|t| t.to_u64().map_or_else(|| json!(t.to_string()), |x| json!(x))).collect();
                json!({"degree": d, "betti": h.betti, "torsion": torsion})
            })
            .collect();
        json!({"reduced": self.reduced, "empty": self.empty, "degrees": degrees})
    }
}

fn homology_impl(cc: &ChainComplex, reduced: bool) -> HomologyResult {
    let Some(top) = cc.top_degree() else {
        return HomologyResult { reduced, degrees: vec![], empty: true };
    };
    let factors: Vec<Vec<BigInt>> = cc.boundaries.iter().map(SparseMatrix::invariant_factors).collect();
    let rank = |d: usize| -> usize {
        match d {
            0 => usize::from(reduced && cc.rank(0) > 0),
            d if d <= top => factors[d].len(),
            _ => 0,
        }
    };
    let degrees = (0..=top)
        .map(|d| DegreeHomology {
            betti: cc.rank(d) - rank(d) - rank(d + 1),
            torsion: factors.get(d + 1).map_or(vec![], |f| f.iter().filter(|x| !x.is_one()).cloned().collect()),
        })
        .collect();
    HomologyResult { reduced, degrees, empty: false }
}

pub fn reduced_homology(cc: &ChainComplex) -> HomologyResult {
    homology_impl(cc, true)
}

pub fn homology(cc: &ChainComplex) -> HomologyResult {
    homology_impl(cc, false)
}

/// Reduced Betti numbers over ℚ, from ranks computed without Smith normal form.
pub fn reduced_betti_q(cc: &ChainComplex) -> Vec<usize> {
    betti_over(cc, SparseMatrix::rank_q)
}

/// Reduced Betti numbers over the field with `p` elements.
pub fn reduced_betti_mod_p(cc: &ChainComplex, p: u64) -> Vec<usize> {
    betti_over(cc, |m| m.rank_mod_p(p))
}

fn betti_over<F: Fn(&SparseMatrix) -> usize>(cc: &ChainComplex, rank_of: F) -> Vec<usize> {
    let Some(top) = cc.top_degree() else { return vec![] };
    let ranks: Vec<usize> = cc.boundaries.iter().map(&rank_of).collect();
    (0..=top)
        .map(|d| {
            let rd = if d == 0 { usize::from(cc.rank(0) > 0) } else { ranks[d] };
            cc.rank(d) - rd - ranks.get(d + 1).copied().unwrap_or(0)
        })
        .collect()
}

/// Homological connectivity read off from computed reduced homology.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Connectivity {
    /// `H̃_0 .. H̃_n` vanish and `H̃_{n+1}` does not.
    Exact(i64),
    /// Everything computed vanishes; only a lower bound is known.
    AtLeast(i64),
}

impl Connectivity {
    pub fn to_json(self) -> Value {
        match self {
            Connectivity::Exact(n) => json!({"value": n, "exact": true}),
            Connectivity::AtLeast(n) => json!({"value": n, "exact": false}),
        }
    }
}

/// Largest `n` with `H̃_0..H̃_n` all zero. If `D` degrees were computed and all vanish,
/// only `n >= D - 1` is claimed. The empty complex gives `-2`.
pub fn homological_connectivity(h: &HomologyResult) -> Connectivity {
    if h.empty {
        return Connectivity::Exact(-2);
    }
    match h.degrees.iter().position(|d| !d.is_zero()) {
        Some(f) => Connectivity::Exact(f as i64 - 1),
        None => Connectivity::AtLeast(h.degrees.len() as i64 - 1),
    }
}

/// Cubes `bQ_T` of the ball whose top corner has exponent at most `t`.
pub fn sublevel_complex(ball: &CubeBall, t: i64) -> CellComplex {
    ball.cell_complex_filtered(|c| ball.top_exponent(c) <= t)
}
