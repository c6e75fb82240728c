//! Right-angled Artin groups: canonical words, exponent, parabolic projections.
//!
//! The canonical form of an element is the ShortLex-least word among all reduced
//! words representing it. Letters are ordered by vertex index, with `x` before `x^-1`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default cap on the number of letters handled by the normaliser.
pub const DEFAULT_WORD_CAP: usize = 10_000;

/// A generator or its inverse. Derived ordering is the letter order of the canonical form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: usize, sign: i8) -> Letter {
        Letter { gen, inv: sign < 0 }
    }
    pub fn pos(gen: usize) -> Letter {
        Letter { gen, inv: false }
    }
    pub fn neg(gen: usize) -> Letter {
        Letter { gen, inv: true }
    }
    pub fn inverse(self) -> Letter {
        Letter { gen: self.gen, inv: !self.inv }
    }
    pub fn sign(self) -> i64 {
        if self.inv {
            -1
        } else {
            1
        }
    }
}

/// An arbitrary word over the vertices of a graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArtinWord(pub Vec<Letter>);

/// A word in canonical form. Equal elements have identical canonical words.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalWord(Vec<Letter>);

impl NormalWord {
    pub fn identity() -> NormalWord {
        NormalWord(Vec::new())
    }
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn exponent(&self) -> i64 {
        self.0.iter().map(|l| l.sign()).sum()
    }
    pub fn as_word(&self) -> ArtinWord {
        ArtinWord(self.0.clone())
    }
    /// Whether this is the single letter `l`.
    pub fn is_letter(&self, l: Letter) -> bool {
        self.0.len() == 1 && self.0[0] == l
    }
}

impl ArtinWord {
    pub fn exponent(&self) -> i64 {
        self.0.iter().map(|l| l.sign()).sum()
    }
    pub fn inverse(&self) -> ArtinWord {
        ArtinWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }
}

/// Normaliser bound to a graph.
#[derive(Clone, Debug)]
pub struct Raag {
    graph: Graph,
    cap: usize,
}

impl Raag {
    pub fn new(graph: Graph) -> Raag {
        Raag { graph, cap: DEFAULT_WORD_CAP }
    }

    pub fn with_cap(graph: Graph, cap: usize) -> Raag {
        Raag { graph, cap }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn rank(&self) -> usize {
        self.graph.len()
    }

    /// Whether two letters may be swapped: distinct adjacent generators.
    pub fn commute(&self, a: Letter, b: Letter) -> bool {
        a.gen != b.gen && self.graph.adjacent(a.gen, b.gen)
    }

    fn check(&self, w: &[Letter]) -> Result<()> {
        if w.len() > self.cap {
            return Err(Error::WordTooLong { len: w.len(), cap: self.cap });
        }
        if let Some(l) = w.iter().find(|l| l.gen >= self.graph.len()) {
            return Err(Error::UnknownGenerator(format!("generator #{}", l.gen)));
        }
        Ok(())
    }

    /// Canonical form of an arbitrary word.
    pub fn normal_form(&self, w: &ArtinWord) -> Result<NormalWord> {
        self.check(&w.0)?;
        Ok(self.lex_least(self.reduce(&w.0)))
    }

    /// Remove every cancelling pair `x ... x^-1` whose middle commutes with `x`.
    ///
    /// Letters are appended one by one; a new letter cancels with the last occurrence of its
    /// generator when everything after that occurrence commutes with it. This keeps the
    /// prefix reduced at every step.
    fn reduce(&self, w: &[Letter]) -> Vec<Letter> {
        let mut out: Vec<Letter> = Vec::with_capacity(w.len());
        for &x in w {
            let mut cancel = None;
            for i in (0..out.len()).rev() {
                let y = out[i];
                if y.gen == x.gen {
                    if y == x.inverse() {
                        cancel = Some(i);
                    }
                    break;
                }
                if !self.commute(x, y) {
                    break;
                }
            }
            match cancel {
                Some(i) => {
                    out.remove(i);
                }
                None => out.push(x),
            }
        }
        out
    }

    /// Least linear extension of the dependence order of a reduced word.
    fn lex_least(&self, w: Vec<Letter>) -> NormalWord {
        let n = w.len();
        let k = self.graph.len();
        // Each letter depends on the last earlier letter of every generator it fails to
        // commute with; those edges generate the whole dependence order.
        let mut last: Vec<Option<usize>> = vec![None; k];
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for (j, &x) in w.iter().enumerate() {
            for g in 0..k {
                if let Some(i) = last[g] {
                    if g == x.gen || !self.graph.adjacent(g, x.gen) {
                        succ[i].push(j);
                        indeg[j] += 1;
                    }
                }
            }
            last[x.gen] = Some(j);
        }
        let mut heap: BinaryHeap<Reverse<(Letter, usize)>> =
            (0..n).filter(|&j| indeg[j] == 0).map(|j| Reverse((w[j], j))).collect();
        let mut out = Vec::with_capacity(n);
        while let Some(Reverse((l, j))) = heap.pop() {
            out.push(l);
            for &s in &succ[j] {
                indeg[s] -= 1;
                if indeg[s] == 0 {
                    heap.push(Reverse((w[s], s)));
                }
            }
        }
        NormalWord(out)
    }

    pub fn multiply(&self, a: &NormalWord, b: &NormalWord) -> Result<NormalWord> {
        let mut w = a.0.clone();
        w.extend_from_slice(&b.0);
        self.normal_form(&ArtinWord(w))
    }

    pub fn invert(&self, a: &NormalWord) -> Result<NormalWord> {
        self.normal_form(&a.as_word().inverse())
    }

    /// `l * a` for a single letter.
    pub fn prepend(&self, l: Letter, a: &NormalWord) -> Result<NormalWord> {
        let mut w = Vec::with_capacity(a.len() + 1);
        w.push(l);
        w.extend_from_slice(&a.0);
        self.normal_form(&ArtinWord(w))
    }

    pub fn letter(&self, l: Letter) -> NormalWord {
        NormalWord(vec![l])
    }

    /// Delete the letters outside `t` and renormalise. `t` must be a join factor.
    pub fn parabolic_project(&self, t: &[usize], w: &NormalWord) -> Result<NormalWord> {
        if !self.graph.is_join_factor(t) {
            return Err(Error::NotAJoinFactor);
        }
        let kept: Vec<Letter> = w.0.iter().copied().filter(|l| t.contains(&l.gen)).collect();
        self.normal_form(&ArtinWord(kept))
    }

    /// Parse whitespace separated tokens such as `s t^-1 s^2`.
    pub fn parse(&self, text: &str) -> Result<ArtinWord> {
        let mut out = Vec::new();
        for tok in text.split_whitespace() {
            let (gen, pow) = parse_power_token(tok).ok_or_else(|| Error::UnknownGenerator(tok.to_string()))?;
            let g = self.graph.index_of(gen).ok_or_else(|| Error::UnknownGenerator(tok.to_string()))?;
            for _ in 0..pow.unsigned_abs() {
                out.push(Letter::new(g, pow.signum() as i8));
            }
        }
        Ok(ArtinWord(out))
    }

    pub fn format_letters(&self, w: &[Letter]) -> String {
        w.iter().map(|l| self.format_letter(*l)).collect::<Vec<_>>().join(" ")
    }

    pub fn format_letter(&self, l: Letter) -> String {
        if l.inv {
            format!("{}^-1", self.graph.label(l.gen))
        } else {
            self.graph.label(l.gen).to_string()
        }
    }

    pub fn format(&self, w: &NormalWord) -> String {
        self.format_letters(&w.0)
    }

    /// Canonical words of length at most `r`, breadth first.
    pub fn ball(&self, r: usize) -> Vec<NormalWord> {
        let mut seen = std::collections::HashSet::from([NormalWord::identity()]);
        let mut out = vec![NormalWord::identity()];
        let mut frontier = vec![NormalWord::identity()];
        for _ in 0..r {
            let mut next = Vec::new();
            for w in &frontier {
                for g in 0..self.rank() {
                    for inv in [false, true] {
                        let mut v = w.0.clone();
                        v.push(Letter { gen: g, inv });
                        let nw = self.normal_form(&ArtinWord(v)).expect("small word");
                        if nw.len() == w.len() + 1 && seen.insert(nw.clone()) {
                            next.push(nw);
                        }
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}

/// Split `x^k` (also accepting `x⁻¹`) into label and power.
pub fn parse_power_token(tok: &str) -> Option<(&str, i64)> {
    if let Some(base) = tok.strip_suffix("⁻¹") {
        return Some((base, -1));
    }
    match tok.split_once('^') {
        Some((base, p)) => {
            let p: i64 = p.parse().ok()?;
            if base.is_empty() || p == 0 {
                None
            } else {
                Some((base, p))
            }
        }
        None => Some((tok, 1)),
    }
}

/// Whether every relator has exponent sum zero.
pub fn is_balanced(relators: &[ArtinWord]) -> bool {
    relators.iter().all(|r| r.exponent() == 0)
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inv {
            write!(f, "#{}^-1", self.gen)
        } else {
            write!(f, "#{}", self.gen)
        }
    }
}
