//! Exact models of an injective homomorphism `phi: O -> U`.
//!
//! Three families are available: finite permutation groups, the integers with
//! multiplication by `m`, and the trivial group.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest permitted order of a finite base group (keeps the product table small).
pub const MAX_FINITE_ORDER: usize = 720;

/// An element of the base group `U`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UElem {
    /// Index into the element table of a finite model.
    Fin(u16),
    /// An integer of the shift model.
    Int(i64),
}

/// Which subgroup an index or transversal refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subgroup {
    O,
    PhiO,
}

/// Index of a subgroup, possibly infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Index {
    Finite(u64),
    Infinite,
}

impl Index {
    pub fn finite(self) -> Option<u64> {
        match self {
            Index::Finite(n) => Some(n),
            Index::Infinite => None,
        }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(n) => write!(f, "{n}"),
            Index::Infinite => write!(f, "inf"),
        }
    }
}

/// Permutation in zero-based one-line notation: `p[i]` is the image of `i`.
pub type Perm = Vec<u8>;

fn compose(p: &Perm, q: &Perm) -> Perm {
    // (p q)(i) = p(q(i)): q acts first.
    q.iter().map(|&i| p[i as usize]).collect()
}

fn invert(p: &Perm) -> Perm {
    let mut out = vec![0u8; p.len()];
    for (i, &j) in p.iter().enumerate() {
        out[j as usize] = i as u8;
    }
    out
}

/// Natural order on permutations: by largest moved point, then by one-line images.
/// With this order `S_k` is an initial segment of `S_{k+1}`.
fn perm_key(p: &Perm) -> (usize, Perm) {
    let top = p.iter().enumerate().filter(|(i, &j)| *i != j as usize).map(|(i, _)| i + 1).max().unwrap_or(0);
    (top, p.clone())
}

/// Format a permutation in cycle notation with one-based points, `e` for the identity.
pub fn cycle_string(p: &Perm) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    let sep = if p.len() > 9 { "," } else { "" };
    for start in 0..p.len() {
        if seen[start] || p[start] as usize == start {
            continue;
        }
        let mut cyc = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cyc.push((x + 1).to_string());
            x = p[x] as usize;
        }
        out.push('(');
        out.push_str(&cyc.join(sep));
        out.push(')');
    }
    if out.is_empty() {
        "e".to_string()
    } else {
        out
    }
}

/// Parse `e`, cycle notation such as `(123)(45)` or `(1,2)`, or `perm[2,1,3]` (one-based images).
pub fn parse_perm(token: &str, degree: usize) -> Option<Perm> {
    let token = token.trim();
    if token == "e" {
        return Some((0..degree as u8).collect());
    }
    if let Some(body) = token.strip_prefix("perm[").and_then(|t| t.strip_suffix(']')) {
        let imgs: Option<Vec<usize>> = body.split(',').map(|x| x.trim().parse().ok()).collect();
        return perm_from_one_based(&imgs?, degree).ok();
    }
    if !token.starts_with('(') {
        return None;
    }
    let mut p: Perm = (0..degree as u8).collect();
    let mut rest = token;
    while !rest.is_empty() {
        let close = rest.find(')')?;
        let body = rest.strip_prefix('(')?.get(..close - 1)?;
        let pts: Option<Vec<usize>> = if body.contains(',') || body.contains(' ') {
            body.split(|c| c == ',' || c == ' ').filter(|x| !x.is_empty()).map(|x| x.parse().ok()).collect()
        } else {
            body.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
        };
        let pts = pts?;
        if pts.iter().any(|&x| x == 0 || x > degree) {
            return None;
        }
        // Cycles compose right to left like the rest of the crate.
        let mut c: Perm = (0..degree as u8).collect();
        for i in 0..pts.len() {
            c[pts[i] - 1] = (pts[(i + 1) % pts.len()] - 1) as u8;
        }
        p = compose(&p, &c);
        rest = &rest[close + 1..];
    }
    Some(p)
}

fn perm_from_one_based(images: &[usize], degree: usize) -> Result<Perm> {
    if images.len() != degree {
        return Err(Error::InvalidModel(format!("permutation {images:?} does not have degree {degree}")));
    }
    let p: Vec<u8> = images
        .iter()
        .map(|&x| if x >= 1 && x <= degree { Ok((x - 1) as u8) } else { Err(Error::InvalidModel(format!("point {x} out of range"))) })
        .collect::<Result<_>>()?;
    let mut seen = vec![false; degree];
    for &x in &p {
        if std::mem::replace(&mut seen[x as usize], true) {
            return Err(Error::InvalidModel(format!("{images:?} is not a permutation")));
        }
    }
    Ok(p)
}

/// A finite permutation group `U` with subgroup `O` and injective `phi: O -> U`.
#[derive(Clone, Debug)]
pub struct FiniteModel {
    degree: usize,
    elems: Vec<Perm>,
    lookup: HashMap<Perm, u16>,
    table: Vec<u16>,
    inverse: Vec<u16>,
    in_o: Vec<bool>,
    in_phi_o: Vec<bool>,
    phi: Vec<Option<u16>>,
    phi_inv: Vec<Option<u16>>,
    right_rep_o: Vec<u16>,
    right_rep_phi: Vec<u16>,
    left_reps_o: Vec<u16>,
    left_reps_phi: Vec<u16>,
}

impl FiniteModel {
    /// Build from generators (zero-based one-line permutations) and images of the `O` generators.
    pub fn new(degree: usize, u_gens: &[Perm], o_gens: &[Perm], phi_images: &[Perm]) -> Result<FiniteModel> {
        if degree == 0 || degree > 16 {
            return Err(Error::InvalidModel(format!("degree {degree} outside 1..=16")));
        }
        if o_gens.len() != phi_images.len() {
            return Err(Error::InvalidModel("O_gens and phi_images differ in length".into()));
        }
        for p in u_gens.iter().chain(o_gens).chain(phi_images) {
            if p.len() != degree {
                return Err(Error::InvalidModel(format!("generator {p:?} has wrong degree")));
            }
        }
        let ident: Perm = (0..degree as u8).collect();
        let elems = closure(&ident, u_gens)?;
        let mut m = FiniteModel::from_elements(degree, elems);
        let o_set = closure(&ident, o_gens)?;
        let mut in_o = vec![false; m.elems.len()];
        for p in &o_set {
            let i = *m.lookup.get(p).ok_or_else(|| Error::InvalidModel("O is not contained in U".into()))?;
            in_o[i as usize] = true;
        }
        // Extend phi along the Cayley graph of O; a clash means phi is not well defined.
        let mut phi: Vec<Option<u16>> = vec![None; m.elems.len()];
        phi[0] = Some(0);
        let gen_idx: Vec<u16> = o_gens.iter().map(|p| m.lookup[p]).collect();
        let mut img_idx = Vec::new();
        for p in phi_images {
            img_idx.push(*m.lookup.get(p).ok_or_else(|| Error::InvalidModel("phi image outside U".into()))?);
        }
        let mut queue = VecDeque::from([0u16]);
        while let Some(w) = queue.pop_front() {
            let fw = phi[w as usize].expect("visited");
            for (g, img) in gen_idx.iter().zip(&img_idx) {
                let x = m.mul_idx(w, *g);
                let fx = m.mul_idx(fw, *img);
                match phi[x as usize] {
                    None => {
                        phi[x as usize] = Some(fx);
                        queue.push_back(x);
                    }
                    Some(old) if old != fx => {
                        return Err(Error::InvalidModel("phi does not extend to a homomorphism".into()))
                    }
                    _ => {}
                }
            }
        }
        m.install_phi(in_o, phi)?;
        m.check_homomorphism()?;
        Ok(m)
    }

    /// Build from one-based one-line permutations as used in configuration files.
    pub fn from_one_based(degree: usize, u_gens: &[Vec<usize>], o_gens: &[Vec<usize>], phi_images: &[Vec<usize>]) -> Result<FiniteModel> {
        let conv = |v: &[Vec<usize>]| v.iter().map(|p| perm_from_one_based(p, degree)).collect::<Result<Vec<_>>>();
        FiniteModel::new(degree, &conv(u_gens)?, &conv(o_gens)?, &conv(phi_images)?)
    }

    /// Replace the phi table by an arbitrary bijection between `O` and its image, skipping the
    /// homomorphism check. Only useful for exercising failure detection.
    pub fn with_phi_unchecked(&self, table: &[(Perm, Perm)]) -> Result<FiniteModel> {
        let mut m = self.clone();
        let mut phi = vec![None; m.elems.len()];
        for (a, b) in table {
            let ia = *m.lookup.get(a).ok_or_else(|| Error::InvalidModel("unknown element".into()))?;
            let ib = *m.lookup.get(b).ok_or_else(|| Error::InvalidModel("unknown element".into()))?;
            phi[ia as usize] = Some(ib);
        }
        let in_o = m.in_o.clone();
        m.install_phi(in_o, phi)?;
        Ok(m)
    }

    fn from_elements(degree: usize, mut elems: Vec<Perm>) -> FiniteModel {
        elems.sort_by_key(perm_key);
        let lookup: HashMap<Perm, u16> = elems.iter().enumerate().map(|(i, p)| (p.clone(), i as u16)).collect();
        let n = elems.len();
        let mut table = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = lookup[&compose(&elems[a], &elems[b])];
            }
        }
        let inverse = elems.iter().map(|p| lookup[&invert(p)]).collect();
        FiniteModel {
            degree,
            elems,
            lookup,
            table,
            inverse,
            in_o: vec![],
            in_phi_o: vec![],
            phi: vec![],
            phi_inv: vec![],
            right_rep_o: vec![],
            right_rep_phi: vec![],
            left_reps_o: vec![],
            left_reps_phi: vec![],
        }
    }

    fn install_phi(&mut self, in_o: Vec<bool>, phi: Vec<Option<u16>>) -> Result<()> {
        let n = self.elems.len();
        let mut in_phi_o = vec![false; n];
        let mut phi_inv = vec![None; n];
        for (w, img) in phi.iter().enumerate() {
            match (in_o[w], img) {
                (true, Some(v)) => {
                    if in_phi_o[*v as usize] {
                        return Err(Error::InvalidModel("phi is not injective".into()));
                    }
                    in_phi_o[*v as usize] = true;
                    phi_inv[*v as usize] = Some(w as u16);
                }
                (true, None) => return Err(Error::InvalidModel("phi undefined on part of O".into())),
                (false, Some(_)) => return Err(Error::InvalidModel("phi defined outside O".into())),
                (false, None) => {}
            }
        }
        self.right_rep_o = self.right_reps(&in_o);
        self.right_rep_phi = self.right_reps(&in_phi_o);
        self.left_reps_o = self.left_reps(&in_o);
        self.left_reps_phi = self.left_reps(&in_phi_o);
        self.in_o = in_o;
        self.in_phi_o = in_phi_o;
        self.phi = phi;
        self.phi_inv = phi_inv;
        Ok(())
    }

    fn check_homomorphism(&self) -> Result<()> {
        let o: Vec<u16> = self.subgroup_members(Subgroup::O);
        for &a in &o {
            for &b in &o {
                let lhs = self.phi[self.mul_idx(a, b) as usize];
                let rhs = self.mul_idx(self.phi[a as usize].unwrap(), self.phi[b as usize].unwrap());
                if lhs != Some(rhs) {
                    return Err(Error::InvalidModel("phi is not a homomorphism".into()));
                }
            }
        }
        Ok(())
    }

    /// For each element, the least element of its right coset `H u`.
    fn right_reps(&self, member: &[bool]) -> Vec<u16> {
        let n = self.elems.len();
        let mut rep = vec![u16::MAX; n];
        for u in 0..n as u16 {
            if rep[u as usize] != u16::MAX {
                continue;
            }
            for h in 0..n as u16 {
                if member[h as usize] {
                    rep[self.mul_idx(h, u) as usize] = u;
                }
            }
        }
        rep
    }

    /// Least element of each left coset `u H`, in increasing order.
    fn left_reps(&self, member: &[bool]) -> Vec<u16> {
        let n = self.elems.len();
        let mut covered = vec![false; n];
        let mut reps = Vec::new();
        for u in 0..n as u16 {
            if covered[u as usize] {
                continue;
            }
            reps.push(u);
            for h in 0..n as u16 {
                if member[h as usize] {
                    covered[self.mul_idx(u, h) as usize] = true;
                }
            }
        }
        reps
    }

    fn mul_idx(&self, a: u16, b: u16) -> u16 {
        self.table[a as usize * self.elems.len() + b as usize]
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn perm(&self, i: u16) -> &Perm {
        &self.elems[i as usize]
    }

    pub fn index_of(&self, p: &Perm) -> Option<u16> {
        self.lookup.get(p).copied()
    }

    fn subgroup_members(&self, which: Subgroup) -> Vec<u16> {
        let mask = match which {
            Subgroup::O => &self.in_o,
            Subgroup::PhiO => &self.in_phi_o,
        };
        (0..self.elems.len() as u16).filter(|&i| mask[i as usize]).collect()
    }
}

fn closure(ident: &Perm, gens: &[Perm]) -> Result<Vec<Perm>> {
    let mut seen: HashMap<Perm, ()> = HashMap::from([(ident.clone(), ())]);
    let mut out = vec![ident.clone()];
    let mut queue = VecDeque::from([ident.clone()]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = compose(&p, g);
            if !seen.contains_key(&q) {
                if out.len() >= MAX_FINITE_ORDER {
                    return Err(Error::InvalidModel(format!("group order exceeds {MAX_FINITE_ORDER}")));
                }
                seen.insert(q.clone(), ());
                out.push(q.clone());
                queue.push_back(q);
            }
        }
    }
    Ok(out)
}

/// `U = Z` with `phi(u) = m u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftModel {
    pub m: i64,
}

/// Height of an element of `N`: the largest `j` with `n` in `s^j O s^-j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Latitude {
    Finite(i64),
    PlusInfinity,
}

impl Latitude {
    /// Whether a cell of height `h` lies at or below this latitude.
    pub fn admits(self, h: i64) -> bool {
        match self {
            Latitude::Finite(t) => h <= t,
            Latitude::PlusInfinity => true,
        }
    }
}

impl fmt::Display for Latitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Latitude::Finite(t) => write!(f, "{t}"),
            Latitude::PlusInfinity => write!(f, "+inf"),
        }
    }
}

/// Element of the normal closure `N` of `U` in the shift regime, stored as
/// `s^-k u s^k`, i.e. the number `u / m^k`. Reduced means `k = 0` or `m` does not divide `u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NPair {
    pub k: u32,
    pub u: BigInt,
}

impl NPair {
    pub fn zero() -> NPair {
        NPair { k: 0, u: BigInt::zero() }
    }

    pub fn from_int(u: i64) -> NPair {
        NPair { k: 0, u: BigInt::from(u) }
    }

    /// Canonical representative of `(k, u)` under `(k, u) ~ (k + 1, m u)`.
    pub fn reduce(k: u32, u: BigInt, m: i64) -> NPair {
        let mb = BigInt::from(m);
        let (mut k, mut u) = (k, u);
        if u.is_zero() {
            return NPair::zero();
        }
        while k > 0 {
            let (q, r) = u.div_rem(&mb);
            if !r.is_zero() {
                break;
            }
            u = q;
            k -= 1;
        }
        NPair { k, u }
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.k == 0
    }

    pub fn add(&self, other: &NPair, m: i64) -> NPair {
        let k = self.k.max(other.k);
        let mb = BigInt::from(m);
        let a = &self.u * num_traits::pow(mb.clone(), (k - self.k) as usize);
        let b = &other.u * num_traits::pow(mb, (k - other.k) as usize);
        NPair::reduce(k, a + b, m)
    }

    pub fn neg(&self) -> NPair {
        NPair { k: self.k, u: -&self.u }
    }

    /// Multiply by `m^e`, which is conjugation by `s^e`.
    pub fn shift(&self, e: i64, m: i64) -> NPair {
        if self.is_zero() {
            return NPair::zero();
        }
        if e >= 0 {
            let e = e as u32;
            if e <= self.k {
                NPair::reduce(self.k - e, self.u.clone(), m)
            } else {
                NPair { k: 0, u: &self.u * num_traits::pow(BigInt::from(m), (e - self.k) as usize) }
            }
        } else {
            NPair::reduce(self.k + (-e) as u32, self.u.clone(), m)
        }
    }

    /// Exact value as a pair (numerator, denominator).
    pub fn value(&self, m: i64) -> (BigInt, BigInt) {
        (self.u.clone(), num_traits::pow(BigInt::from(m), self.k as usize))
    }

    /// The latitude `phi_depth(u) - k`, or plus infinity for zero.
    pub fn latitude(&self, m: i64) -> Latitude {
        match m_adic_valuation(&self.u, m) {
            None => Latitude::PlusInfinity,
            Some(d) => Latitude::Finite(d as i64 - self.k as i64),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.k == 0 {
            self.u.to_i64()
        } else {
            None
        }
    }
}

impl fmt::Display for NPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k, self.u)
    }
}

/// Largest `j` with `m^j | u`, `None` for zero.
pub fn m_adic_valuation(u: &BigInt, m: i64) -> Option<u32> {
    if u.is_zero() {
        return None;
    }
    let mb = BigInt::from(m);
    let mut v = u.abs();
    let mut j = 0;
    loop {
        let (q, r) = v.div_rem(&mb);
        if !r.is_zero() {
            return Some(j);
        }
        v = q;
        j += 1;
    }
}

/// Model configuration as read from JSON. Permutations are one-based one-line images.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelConfig {
    Shift {
        m: i64,
    },
    Finite {
        degree: usize,
        #[serde(rename = "U_gens")]
        u_gens: Vec<Vec<usize>>,
        #[serde(rename = "O_gens")]
        o_gens: Vec<Vec<usize>>,
        phi_images: Vec<Vec<usize>>,
    },
    Trivial,
}

/// A model of `phi: O -> U`.
#[derive(Clone, Debug)]
pub enum BaseModel {
    Finite(FiniteModel),
    Shift(ShiftModel),
    Trivial(FiniteModel),
}

impl BaseModel {
    pub fn from_config(cfg: &ModelConfig) -> Result<BaseModel> {
        match cfg {
            ModelConfig::Shift { m } => BaseModel::shift(*m),
            ModelConfig::Finite { degree, u_gens, o_gens, phi_images } => {
                Ok(BaseModel::Finite(FiniteModel::from_one_based(*degree, u_gens, o_gens, phi_images)?))
            }
            ModelConfig::Trivial => Ok(BaseModel::trivial()),
        }
    }

    pub fn from_json(text: &str) -> Result<BaseModel> {
        let cfg: ModelConfig = serde_json::from_str(text).map_err(|e| Error::Config(format!("model JSON: {e}")))?;
        BaseModel::from_config(&cfg)
    }

    pub fn shift(m: i64) -> Result<BaseModel> {
        if m < 2 {
            return Err(Error::InvalidModel(format!("shift factor {m} must be at least 2")));
        }
        Ok(BaseModel::Shift(ShiftModel { m }))
    }

    pub fn trivial() -> BaseModel {
        BaseModel::Trivial(FiniteModel::new(1, &[], &[], &[]).expect("trivial group"))
    }

    /// `U = S_3`, `O = A_3`, `phi = id`.
    pub fn s3_a3() -> BaseModel {
        let cfg = ModelConfig::Finite {
            degree: 3,
            u_gens: vec![vec![2, 1, 3], vec![2, 3, 1]],
            o_gens: vec![vec![2, 3, 1]],
            phi_images: vec![vec![2, 3, 1]],
        };
        BaseModel::from_config(&cfg).expect("S3/A3 model")
    }

    pub fn kind(&self) -> &'static str {
        match self {
            BaseModel::Finite(_) => "finite",
            BaseModel::Shift(_) => "shift",
            BaseModel::Trivial(_) => "trivial",
        }
    }

    pub fn describe(&self) -> String {
        match self {
            BaseModel::Finite(f) => format!("finite(degree {}, |U|={})", f.degree, f.order()),
            BaseModel::Shift(s) => format!("shift(m={})", s.m),
            BaseModel::Trivial(_) => "trivial".into(),
        }
    }

    fn fin(&self) -> Option<&FiniteModel> {
        match self {
            BaseModel::Finite(f) | BaseModel::Trivial(f) => Some(f),
            BaseModel::Shift(_) => None,
        }
    }

    pub fn finite_model(&self) -> Option<&FiniteModel> {
        self.fin()
    }

    /// Shift factor, for the shift model only.
    pub fn shift_factor(&self) -> Option<i64> {
        match self {
            BaseModel::Shift(s) => Some(s.m),
            _ => None,
        }
    }

    pub fn identity(&self) -> UElem {
        match self {
            BaseModel::Shift(_) => UElem::Int(0),
            _ => UElem::Fin(0),
        }
    }

    pub fn is_identity(&self, u: &UElem) -> bool {
        *u == self.identity()
    }

    pub fn mul(&self, a: &UElem, b: &UElem) -> UElem {
        match (self, a, b) {
            (BaseModel::Shift(_), UElem::Int(x), UElem::Int(y)) => UElem::Int(x.checked_add(*y).expect("integer overflow in U")),
            (_, UElem::Fin(x), UElem::Fin(y)) => UElem::Fin(self.fin().expect("finite").mul_idx(*x, *y)),
            _ => panic!("element does not belong to this model"),
        }
    }

    pub fn inv(&self, a: &UElem) -> UElem {
        match (self, a) {
            (BaseModel::Shift(_), UElem::Int(x)) => UElem::Int(-x),
            (_, UElem::Fin(x)) => UElem::Fin(self.fin().expect("finite").inverse[*x as usize]),
            _ => panic!("element does not belong to this model"),
        }
    }

    pub fn in_o(&self, u: &UElem) -> bool {
        match (self, u) {
            (BaseModel::Shift(_), _) => true,
            (_, UElem::Fin(x)) => self.fin().unwrap().in_o[*x as usize],
            _ => false,
        }
    }

    pub fn in_phi_o(&self, u: &UElem) -> bool {
        match (self, u) {
            (BaseModel::Shift(s), UElem::Int(x)) => x % s.m == 0,
            (_, UElem::Fin(x)) => self.fin().unwrap().in_phi_o[*x as usize],
            _ => false,
        }
    }

    /// Membership in `phi^k(O)`.
    pub fn in_phi_power(&self, u: &UElem, k: u32) -> bool {
        match (self, u) {
            (BaseModel::Shift(s), UElem::Int(x)) => {
                let mk = (s.m as i128).checked_pow(k);
                mk.map_or(*x == 0, |mk| (*x as i128) % mk == 0)
            }
            _ => {
                let mut cur = u.clone();
                for _ in 0..k {
                    match self.phi_inv(&cur) {
                        Ok(p) => cur = p,
                        Err(_) => return false,
                    }
                }
                self.in_o(&cur)
            }
        }
    }

    pub fn phi(&self, w: &UElem) -> Result<UElem> {
        match (self, w) {
            (BaseModel::Shift(s), UElem::Int(x)) => Ok(UElem::Int(x.checked_mul(s.m).ok_or(Error::Overflow)?)),
            (_, UElem::Fin(x)) => self.fin().unwrap().phi[*x as usize]
                .map(UElem::Fin)
                .ok_or_else(|| Error::NotInDomain(format!("{} is not in O", self.format(w)))),
            _ => Err(Error::NotInDomain("foreign element".into())),
        }
    }

    pub fn phi_inv(&self, v: &UElem) -> Result<UElem> {
        match (self, v) {
            (BaseModel::Shift(s), UElem::Int(x)) => {
                if x % s.m == 0 {
                    Ok(UElem::Int(x / s.m))
                } else {
                    Err(Error::NotInDomain(format!("{x} is not in phi(O)")))
                }
            }
            (_, UElem::Fin(x)) => self.fin().unwrap().phi_inv[*x as usize]
                .map(UElem::Fin)
                .ok_or_else(|| Error::NotInDomain(format!("{} is not in phi(O)", self.format(v)))),
            _ => Err(Error::NotInDomain("foreign element".into())),
        }
    }

    /// Apply `phi` (k > 0) or `phi^-1` (k < 0) repeatedly.
    pub fn phi_pow(&self, w: &UElem, k: i64) -> Result<UElem> {
        let mut cur = w.clone();
        for _ in 0..k.unsigned_abs() {
            cur = if k > 0 { self.phi(&cur)? } else { self.phi_inv(&cur)? };
        }
        Ok(cur)
    }

    /// `u = omega * r` with `omega` in `O` and `r` in the fixed transversal of `O\U`.
    pub fn decompose(&self, u: &UElem) -> (UElem, UElem) {
        match (self, u) {
            (BaseModel::Shift(_), UElem::Int(_)) => (u.clone(), UElem::Int(0)),
            (_, UElem::Fin(x)) => {
                let r = self.fin().unwrap().right_rep_o[*x as usize];
                let rf = UElem::Fin(r);
                (self.mul(u, &self.inv(&rf)), rf)
            }
            _ => panic!("element does not belong to this model"),
        }
    }

    /// `u = v * r` with `v` in `phi(O)` and `r` in the fixed transversal of `phi(O)\U`.
    pub fn decompose_phi(&self, u: &UElem) -> (UElem, UElem) {
        match (self, u) {
            (BaseModel::Shift(s), UElem::Int(x)) => {
                let r = x.rem_euclid(s.m);
                (UElem::Int(x - r), UElem::Int(r))
            }
            (_, UElem::Fin(x)) => {
                let r = self.fin().unwrap().right_rep_phi[*x as usize];
                let rf = UElem::Fin(r);
                (self.mul(u, &self.inv(&rf)), rf)
            }
            _ => panic!("element does not belong to this model"),
        }
    }

    /// The transversal `R` of `O\U` (only finite for finite models; `{0}` for the shift model).
    pub fn right_transversal(&self) -> Vec<UElem> {
        match self {
            BaseModel::Shift(_) => vec![UElem::Int(0)],
            _ => {
                let f = self.fin().unwrap();
                let mut reps: Vec<u16> = f.right_rep_o.clone();
                reps.sort_unstable();
                reps.dedup();
                reps.into_iter().map(UElem::Fin).collect()
            }
        }
    }

    /// Transversal of the left cosets `U/H`, least element first.
    pub fn left_transversal(&self, which: Subgroup) -> Vec<UElem> {
        match (self, which) {
            (BaseModel::Shift(_), Subgroup::O) => vec![UElem::Int(0)],
            (BaseModel::Shift(s), Subgroup::PhiO) => (0..s.m).map(UElem::Int).collect(),
            (_, Subgroup::O) => self.fin().unwrap().left_reps_o.iter().map(|&i| UElem::Fin(i)).collect(),
            (_, Subgroup::PhiO) => self.fin().unwrap().left_reps_phi.iter().map(|&i| UElem::Fin(i)).collect(),
        }
    }

    pub fn index(&self, which: Subgroup) -> Index {
        Index::Finite(self.left_transversal(which).len() as u64)
    }

    pub fn is_automorphic(&self) -> bool {
        match self {
            BaseModel::Shift(_) => false,
            _ => {
                let f = self.fin().unwrap();
                f.in_o == f.in_phi_o
            }
        }
    }

    pub fn is_shrinking(&self) -> bool {
        matches!(self, BaseModel::Shift(_))
    }

    /// All elements of a finite `U`, in the natural order.
    pub fn elements(&self) -> Option<Vec<UElem>> {
        self.fin().map(|f| (0..f.order() as u16).map(UElem::Fin).collect())
    }

    /// Elements of `O` for finite models.
    pub fn o_elements(&self) -> Option<Vec<UElem>> {
        self.fin().map(|f| f.subgroup_members(Subgroup::O).into_iter().map(UElem::Fin).collect())
    }

    /// Elements of `phi^k(O)` for finite models.
    pub fn phi_power_elements(&self, k: u32) -> Option<Vec<UElem>> {
        let all = self.elements()?;
        Some(all.into_iter().filter(|u| self.in_phi_power(u, k)).collect())
    }

    /// Offsets `u` such that the cubes `g u Q_T` with `|T| = k` exhaust the cubes with minimal
    /// corner `gU`: all of `U` for finite models, `0..m^k` for the shift model.
    pub fn cube_offsets(&self, k: u32) -> Vec<UElem> {
        match self {
            BaseModel::Shift(s) => (0..s.m.pow(k)).map(UElem::Int).collect(),
            _ => self.elements().unwrap(),
        }
    }

    /// Largest `j` with `u` in `phi^j(U)`; `None` stands for infinity.
    pub fn phi_depth(&self, u: &UElem) -> Result<Option<u32>> {
        match (self, u) {
            (BaseModel::Shift(s), UElem::Int(x)) => Ok(m_adic_valuation(&BigInt::from(*x), s.m)),
            _ => Err(Error::NotShrinkingModel),
        }
    }

    /// Canonical reduced form of a pair `(k, u)` of the shift model.
    pub fn reduce_n(&self, k: u32, u: i64) -> Result<NPair> {
        match self {
            BaseModel::Shift(s) => Ok(NPair::reduce(k, BigInt::from(u), s.m)),
            _ => Err(Error::NotShrinkingModel),
        }
    }

    pub fn format(&self, u: &UElem) -> String {
        match (self, u) {
            (_, UElem::Int(x)) => x.to_string(),
            (_, UElem::Fin(i)) => cycle_string(self.fin().unwrap().perm(*i)),
        }
    }

    /// Parse a base-group token: an integer for the shift model, a permutation otherwise.
    pub fn parse(&self, token: &str) -> Option<UElem> {
        match self {
            BaseModel::Shift(_) => token.parse::<i64>().ok().map(UElem::Int),
            _ => {
                let f = self.fin().unwrap();
                let p = parse_perm(token, f.degree)?;
                f.index_of(&p).map(UElem::Fin)
            }
        }
    }
}
