//! Element arithmetic in `A_Γ(φ)`.
//!
//! An [`Engine`] fixes a model and a graph and chooses one of three canonical forms:
//!
//! * normal sequences when `phi(O) = O`,
//! * semidirect pairs `Z[1/m] ⋊ A_Γ` for the shift model over a connected graph,
//! * reduced HNN words when the graph has no edges (any model).
//!
//! Every element is stored canonically, so equality of elements is equality of values.

pub mod britton;
pub mod semidirect;
pub mod sequence;

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::model::{BaseModel, Latitude, NPair, Subgroup, UElem};
use crate::raag::{parse_power_token, ArtinWord, Letter, NormalWord, Raag};

pub use britton::BrittonWord;
pub use semidirect::SemiElement;
pub use sequence::NormalSequence;

/// A letter of a word over `U ∪ S^±1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Sym {
    U(UElem),
    Gen(Letter),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EngineKind {
    NormalSequences,
    Semidirect,
    Britton,
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EngineKind::NormalSequences => "normal-sequences",
            EngineKind::Semidirect => "semidirect",
            EngineKind::Britton => "britton",
        })
    }
}

/// A canonical element of `A_Γ(φ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Seq(NormalSequence),
    Semi(SemiElement),
    Britton(BrittonWord),
}

/// Model and graph together with the chosen canonical form.
#[derive(Clone, Debug)]
pub struct Engine {
    model: BaseModel,
    raag: Raag,
    kind: EngineKind,
}

/// Outcome of [`Engine::verify_relations`].
#[derive(Clone, Debug, Default)]
pub struct RelationReport {
    pub checks: usize,
    pub samples: usize,
}

impl Engine {
    /// Pick the canonical form for a model and graph, or explain why none is available.
    pub fn new(model: BaseModel, graph: Graph) -> Result<Engine> {
        let kind = if model.is_automorphic() {
            EngineKind::NormalSequences
        } else if model.is_shrinking() && graph.is_connected() {
            EngineKind::Semidirect
        } else if graph.is_edgeless() {
            EngineKind::Britton
        } else if model.is_shrinking() {
            let comps: Vec<String> = graph
                .component_sets()
                .iter()
                .map(|c| format!("{{{}}}", c.iter().map(|&v| graph.label(v)).collect::<Vec<_>>().join(",")))
                .collect();
            return Err(Error::DisconnectedGraph(format!(
                "{}; the group splits as an amalgam over U of the groups of the components, build each component separately",
                comps.join(" ")
            )));
        } else {
            return Err(Error::RegimeMismatch(
                "no canonical form for a finite model with phi(O) != O over a graph with edges".into(),
            ));
        };
        Ok(Engine { model, raag: Raag::new(graph), kind })
    }

    /// Reduced HNN words over an edgeless graph, whatever the model.
    pub fn britton(model: BaseModel, graph: Graph) -> Result<Engine> {
        if !graph.is_edgeless() {
            return Err(Error::RegimeMismatch("reduced HNN words need an edgeless graph".into()));
        }
        Ok(Engine { model, raag: Raag::new(graph), kind: EngineKind::Britton })
    }

    /// The single-letter extension `H_t(φ)` that receives the retraction.
    pub fn hnn_target(model: BaseModel) -> Engine {
        let g = Graph::new(&["t"], &[]).expect("one vertex");
        Engine { model, raag: Raag::new(g), kind: EngineKind::Britton }
    }

    pub fn kind(&self) -> EngineKind {
        self.kind
    }
    pub fn model(&self) -> &BaseModel {
        &self.model
    }
    pub fn raag(&self) -> &Raag {
        &self.raag
    }
    pub fn graph(&self) -> &Graph {
        self.raag.graph()
    }
    fn m(&self) -> i64 {
        self.model.shift_factor().expect("shift model")
    }

    pub fn identity(&self) -> Element {
        self.from_u(&self.model.identity())
    }

    pub fn from_u(&self, u: &UElem) -> Element {
        match self.kind {
            EngineKind::NormalSequences => Element::Seq(NormalSequence::of_u(u.clone())),
            EngineKind::Semidirect => {
                let UElem::Int(x) = u else { panic!("shift model element expected") };
                Element::Semi(SemiElement { n: NPair::from_int(*x), a: NormalWord::identity() })
            }
            EngineKind::Britton => Element::Britton(BrittonWord::of_u(u.clone())),
        }
    }

    pub fn generator(&self, l: Letter) -> Element {
        self.act(&Sym::Gen(l), &self.identity())
    }

    /// Left multiplication by one symbol.
    pub fn act(&self, x: &Sym, g: &Element) -> Element {
        match (g, x) {
            (Element::Seq(s), Sym::U(u)) => Element::Seq(sequence::act_u(&self.model, u, s)),
            (Element::Seq(s), Sym::Gen(l)) => Element::Seq(sequence::act_letter(&self.model, &self.raag, *l, s)),
            (Element::Semi(e), Sym::U(u)) => {
                let UElem::Int(x) = u else { panic!("shift model element expected") };
                Element::Semi(SemiElement { n: NPair::from_int(*x).add(&e.n, self.m()), a: e.a.clone() })
            }
            (Element::Semi(e), Sym::Gen(l)) => Element::Semi(semidirect::act_letter(self.m(), &self.raag, *l, e)),
            (Element::Britton(w), Sym::U(u)) => Element::Britton(britton::act_u(&self.model, u, w)),
            (Element::Britton(w), Sym::Gen(l)) => Element::Britton(britton::act_letter(&self.model, *l, w)),
        }
    }

    /// Evaluate a word by letting its letters act right to left on the identity.
    pub fn from_word(&self, w: &[Sym]) -> Element {
        w.iter().rev().fold(self.identity(), |g, x| self.act(x, &g))
    }

    /// A word representing the element; evaluating it gives the element back.
    pub fn word(&self, g: &Element) -> Vec<Sym> {
        let mut out = Vec::new();
        match g {
            Element::Seq(s) => {
                out.push(Sym::U(s.head.clone()));
                for (a, u) in &s.tail {
                    out.extend(a.letters().iter().map(|l| Sym::Gen(*l)));
                    out.push(Sym::U(u.clone()));
                }
            }
            Element::Semi(e) => {
                // n = s^-k u s^k with s the first vertex, then the Artin part.
                let k = e.n.k as i64;
                let u = e.n.u.clone();
                let ui = i64::try_from(u).expect("shift coordinate fits in 64 bits");
                out.extend((0..k).map(|_| Sym::Gen(Letter::neg(0))));
                out.push(Sym::U(UElem::Int(ui)));
                out.extend((0..k).map(|_| Sym::Gen(Letter::pos(0))));
                out.extend(e.a.letters().iter().map(|l| Sym::Gen(*l)));
            }
            Element::Britton(w) => {
                out.push(Sym::U(w.head.clone()));
                for (l, u) in &w.tail {
                    out.push(Sym::Gen(*l));
                    out.push(Sym::U(u.clone()));
                }
            }
        }
        out
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        if let (Element::Semi(x), Element::Semi(y)) = (a, b) {
            return Element::Semi(semidirect::multiply(self.m(), &self.raag, x, y));
        }
        self.word(a).iter().rev().fold(b.clone(), |g, x| self.act(x, &g))
    }

    pub fn inv(&self, a: &Element) -> Element {
        if let Element::Semi(x) = a {
            return Element::Semi(semidirect::invert(self.m(), &self.raag, x));
        }
        let w: Vec<Sym> = self.word(a).into_iter().rev().map(|x| self.invert_sym(&x)).collect();
        self.from_word(&w)
    }

    pub fn invert_sym(&self, x: &Sym) -> Sym {
        match x {
            Sym::U(u) => Sym::U(self.model.inv(u)),
            Sym::Gen(l) => Sym::Gen(l.inverse()),
        }
    }

    /// `a b a^-1`.
    pub fn conj(&self, a: &Element, b: &Element) -> Element {
        self.mul(&self.mul(a, b), &self.inv(a))
    }

    /// The element as a member of `U`, if it is one.
    pub fn as_u(&self, g: &Element) -> Option<UElem> {
        match g {
            Element::Seq(s) if s.tail.is_empty() => Some(s.head.clone()),
            Element::Britton(w) if w.tail.is_empty() => Some(w.head.clone()),
            Element::Semi(e) if e.a.is_empty() && e.n.is_integer() => e.n.to_i64().map(UElem::Int),
            _ => None,
        }
    }

    pub fn is_identity(&self, g: &Element) -> bool {
        *g == self.identity()
    }

    /// Extended exponent: `1` on generators, `0` on `U`.
    pub fn exponent(&self, g: &Element) -> i64 {
        match g {
            Element::Seq(s) => s.tail.iter().map(|(a, _)| a.exponent()).sum(),
            Element::Semi(e) => e.a.exponent(),
            Element::Britton(w) => w.tail.iter().map(|(l, _)| l.sign()).sum(),
        }
    }

    /// Image in `A_Γ` under the projection killing `U`.
    pub fn a_part(&self, g: &Element) -> NormalWord {
        match g {
            Element::Semi(e) => e.a.clone(),
            _ => {
                let letters: Vec<Letter> = self
                    .word(g)
                    .into_iter()
                    .filter_map(|x| if let Sym::Gen(l) = x { Some(l) } else { None })
                    .collect();
                self.raag.normal_form(&ArtinWord(letters)).expect("word within cap")
            }
        }
    }

    /// The factor `n` in `g = n a` with `n` in the normal closure of `U` and `a` in `A_Γ`.
    pub fn n_part(&self, g: &Element) -> Element {
        let a = self.a_part(g);
        self.mul(g, &self.of_artin(&self.raag.invert(&a).expect("word within cap")))
    }

    pub fn of_artin(&self, a: &NormalWord) -> Element {
        let w: Vec<Sym> = a.letters().iter().map(|l| Sym::Gen(*l)).collect();
        self.from_word(&w)
    }

    /// Canonical element of the right coset `U g`.
    pub fn right_coset_key(&self, g: &Element) -> Element {
        match g {
            Element::Seq(s) => Element::Seq(NormalSequence { head: self.model.identity(), tail: s.tail.clone() }),
            Element::Britton(w) => Element::Britton(BrittonWord { head: self.model.identity(), tail: w.tail.clone() }),
            Element::Semi(e) => {
                let m = self.m();
                let n = if e.n.k == 0 {
                    NPair::zero()
                } else {
                    let modulus = num_traits::pow(num_bigint::BigInt::from(m), e.n.k as usize);
                    let r = ((&e.n.u % &modulus) + &modulus) % &modulus;
                    NPair::reduce(e.n.k, r, m)
                };
                Element::Semi(SemiElement { n, a: e.a.clone() })
            }
        }
    }

    /// Canonical representative of the left coset `g U`.
    pub fn coset_rep(&self, g: &Element) -> Element {
        self.inv(&self.right_coset_key(&self.inv(g)))
    }

    /// Latitude of an element of `N` in the shift regime.
    pub fn epsilon(&self, n: &Element) -> Result<Latitude> {
        match n {
            Element::Semi(e) if e.a.is_empty() => Ok(e.n.latitude(self.m())),
            Element::Semi(_) => Err(Error::RegimeMismatch("element is not in N".into())),
            _ => Err(Error::RegimeMismatch("latitudes need the semidirect regime".into())),
        }
    }

    /// Image of `g` under the retraction onto `H_t(φ)` sending `u -> u` and every vertex to `t`.
    pub fn hnn_retract(&self, g: &Element) -> Element {
        let target = Engine::hnn_target(self.model.clone());
        let w: Vec<Sym> = self
            .word(g)
            .into_iter()
            .map(|x| match x {
                Sym::Gen(l) => Sym::Gen(Letter { gen: 0, inv: l.inv }),
                u => u,
            })
            .collect();
        target.from_word(&w)
    }

    /// Map an element of `H_t(φ)` into this group by sending `t` to the vertex `x`.
    pub fn hnn_section(&self, target: &Engine, h: &Element, x: usize) -> Element {
        let w: Vec<Sym> = target
            .word(h)
            .into_iter()
            .map(|s| match s {
                Sym::Gen(l) => Sym::Gen(Letter { gen: x, inv: l.inv }),
                u => u,
            })
            .collect();
        self.from_word(&w)
    }

    /// Parse tokens: vertex labels with optional powers, or base-group elements.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Sym>> {
        let mut out = Vec::new();
        for tok in text.split_whitespace() {
            if let Some((base, p)) = parse_power_token(tok) {
                if let Some(g) = self.graph().index_of(base) {
                    out.extend((0..p.unsigned_abs()).map(|_| Sym::Gen(Letter::new(g, p.signum() as i8))));
                    continue;
                }
            }
            match self.model.parse(tok) {
                Some(u) => out.push(Sym::U(u)),
                None => return Err(Error::UnknownGenerator(tok.to_string())),
            }
        }
        Ok(out)
    }

    pub fn parse_element(&self, text: &str) -> Result<Element> {
        Ok(self.from_word(&self.parse_word(text)?))
    }

    pub fn format_sym(&self, x: &Sym) -> String {
        match x {
            Sym::U(u) => self.model.format(u),
            Sym::Gen(l) => self.raag.format_letter(*l),
        }
    }

    /// Whitespace separated tokens that parse back to the same element.
    pub fn word_string(&self, g: &Element) -> String {
        self.word(g).iter().map(|x| self.format_sym(x)).collect::<Vec<_>>().join(" ")
    }

    /// Tuple notation, e.g. `((123), s, e)` or `((1,1), s t)`.
    pub fn format(&self, g: &Element) -> String {
        match g {
            Element::Seq(s) => {
                let mut parts = vec![self.model.format(&s.head)];
                for (a, u) in &s.tail {
                    parts.push(self.raag.format(a));
                    parts.push(self.model.format(u));
                }
                format!("({})", parts.join(", "))
            }
            Element::Semi(e) if e.a.is_empty() => format!("({}, 1)", e.n),
            Element::Semi(e) => format!("({}, {})", e.n, self.raag.format(&e.a)),
            Element::Britton(_) => self.word_string(g),
        }
    }

    /// Random word with `len` symbols; base-group entries drawn from `u_pool`.
    pub fn random_word<R: Rng>(&self, rng: &mut R, len: usize, u_pool: &[UElem]) -> Vec<Sym> {
        (0..len)
            .map(|_| {
                if !u_pool.is_empty() && rng.gen_bool(0.4) {
                    Sym::U(u_pool[rng.gen_range(0..u_pool.len())].clone())
                } else {
                    Sym::Gen(Letter::new(rng.gen_range(0..self.graph().len()), if rng.gen_bool(0.5) { 1 } else { -1 }))
                }
            })
            .collect()
    }

    /// A pool of base-group elements for sampling: all of a finite `U`, or a range of integers.
    pub fn sample_pool(&self) -> Vec<UElem> {
        self.model.elements().unwrap_or_else(|| (-6..=6).map(UElem::Int).collect())
    }

    /// Random valid normal sequence with at most `max_len` syllables.
    pub fn random_sequence<R: Rng>(&self, rng: &mut R, max_len: usize) -> Result<NormalSequence> {
        if self.kind != EngineKind::NormalSequences {
            return Err(Error::RegimeMismatch("normal sequences need phi(O) = O".into()));
        }
        let pool = self.sample_pool();
        let r = self.model.right_transversal();
        let r_nontrivial: Vec<UElem> = r.iter().filter(|u| !self.model.is_identity(u)).cloned().collect();
        let cap = if r_nontrivial.is_empty() { max_len.min(1) } else { max_len };
        let n = rng.gen_range(0..=cap);
        let mut tail = Vec::with_capacity(n);
        for i in 0..n {
            let a = loop {
                let len = rng.gen_range(1..=3);
                let letters: Vec<Letter> = (0..len)
                    .map(|_| Letter::new(rng.gen_range(0..self.graph().len()), if rng.gen_bool(0.5) { 1 } else { -1 }))
                    .collect();
                let a = self.raag.normal_form(&ArtinWord(letters))?;
                if !a.is_empty() {
                    break a;
                }
            };
            let u = if i + 1 == n { r[rng.gen_range(0..r.len())].clone() } else { r_nontrivial[rng.gen_range(0..r_nontrivial.len())].clone() };
            tail.push((a, u));
        }
        Ok(NormalSequence { head: pool[rng.gen_range(0..pool.len())].clone(), tail })
    }

    /// Check the defining relations of `A_Γ(φ)` on the engine's action over sample elements:
    /// `t^∓1 (t^±1 g) = g`, `(t ω) g = (φ(ω) t) g`, `(s t) g = (t s) g` on edges, and the
    /// action of `U` being a homomorphism.
    pub fn verify_relations<R: Rng>(&self, rng: &mut R, samples: usize) -> Result<RelationReport> {
        let pool = self.sample_pool();
        let omegas: Vec<UElem> = self.model.o_elements().unwrap_or_else(|| (-4..=4).map(UElem::Int).collect());
        let mut elems = vec![self.identity()];
        while elems.len() < samples {
            let len = rng.gen_range(0..8);
            elems.push(self.from_word(&self.random_word(rng, len, &pool)));
        }
        let mut report = RelationReport { checks: 0, samples: elems.len() };
        let fail = |rel: String, g: &Element| Error::RelationViolation { relation: rel, witness: self.format(g) };
        for g in &elems {
            if self.act(&Sym::U(self.model.identity()), g) != *g {
                return Err(fail("1 g = g".into(), g));
            }
            for v in 0..self.graph().len() {
                for l in [Letter::pos(v), Letter::neg(v)] {
                    report.checks += 1;
                    let back = self.act(&Sym::Gen(l.inverse()), &self.act(&Sym::Gen(l), g));
                    if back != *g {
                        return Err(fail(format!("{0}^-1 {0} = 1", self.raag.format_letter(l)), g));
                    }
                }
                let t = Sym::Gen(Letter::pos(v));
                for w in &omegas {
                    report.checks += 1;
                    let phi_w = self.model.phi(w)?;
                    let lhs = self.act(&t, &self.act(&Sym::U(w.clone()), g));
                    let rhs = self.act(&Sym::U(phi_w), &self.act(&t, g));
                    if lhs != rhs {
                        return Err(fail(
                            format!("{} {} = phi({}) {}", self.graph().label(v), self.model.format(w), self.model.format(w), self.graph().label(v)),
                            g,
                        ));
                    }
                }
            }
            for (a, b) in self.graph().edges() {
                report.checks += 1;
                let (sa, sb) = (Sym::Gen(Letter::pos(a)), Sym::Gen(Letter::pos(b)));
                if self.act(&sa, &self.act(&sb, g)) != self.act(&sb, &self.act(&sa, g)) {
                    return Err(fail(format!("[{}, {}] = 1", self.graph().label(a), self.graph().label(b)), g));
                }
            }
            for _ in 0..4 {
                report.checks += 1;
                let u = &pool[rng.gen_range(0..pool.len())];
                let v = &pool[rng.gen_range(0..pool.len())];
                let lhs = self.act(&Sym::U(u.clone()), &self.act(&Sym::U(v.clone()), g));
                let rhs = self.act(&Sym::U(self.model.mul(u, v)), g);
                if lhs != rhs {
                    return Err(fail("u (v g) = (u v) g".into(), g));
                }
            }
        }
        Ok(report)
    }

    /// Number of neighbours of a vertex of the Salvetti complex.
    pub fn cayley_abels_degree(&self) -> crate::model::Index {
        let a = self.model.index(Subgroup::O).finite();
        let b = self.model.index(Subgroup::PhiO).finite();
        match (a, b) {
            (Some(a), Some(b)) => crate::model::Index::Finite(self.graph().len() as u64 * (a + b)),
            _ => crate::model::Index::Infinite,
        }
    }
}
