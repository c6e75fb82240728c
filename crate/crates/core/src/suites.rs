//! Named verification suites with machine-readable reports.

use std::fmt;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::elements::{Element, Engine, EngineKind, Sym};
use crate::error::{Error, Result};
use crate::graph::{Chordality, Graph};
use crate::homology::{
    chain_complex, homological_connectivity, reduced_homology, simplicial_chain_complex, HomologyResult,
};
use crate::model::{BaseModel, Subgroup};
use crate::qcalc::{self, DimValue, GradedDim};
use crate::raag::Letter;
use crate::salvetti::apartments::{apartment_trace, check_pair, enumerate_apartments, fixed_cell_disagreements, nerve_graph};
use crate::salvetti::stabiliser::{stabiliser_bruteforce, stabiliser_formula};
use crate::salvetti::valley::{valley_complex, valley_truncation};
use crate::salvetti::{build_ball, check_links, detect_pockets, BallCaps, CubeBall, IntersectionClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    NormalForm,
    Stabilisers,
    Intersections,
    Nerve,
    Links,
    Pockets,
    Valleys,
    Sb,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::NormalForm,
        Suite::Stabilisers,
        Suite::Intersections,
        Suite::Nerve,
        Suite::Links,
        Suite::Pockets,
        Suite::Valleys,
        Suite::Sb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::NormalForm => "normal-form",
            Suite::Stabilisers => "stabilisers",
            Suite::Intersections => "intersections",
            Suite::Nerve => "nerve",
            Suite::Links => "links",
            Suite::Pockets => "pockets",
            Suite::Valleys => "valleys",
            Suite::Sb => "sb",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }

    /// Whether the suite needs a graph and a model.
    pub fn needs_engine(self) -> bool {
        !matches!(self, Suite::Sb | Suite::Valleys)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters shared by all suites; each suite reads the fields it needs.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub graph: Option<Graph>,
    pub model: Option<BaseModel>,
    pub radius: usize,
    pub latitude: i64,
    pub window: usize,
    pub n: u32,
    pub seed: u64,
    pub samples: usize,
    pub caps: BallCaps,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            graph: None,
            model: None,
            radius: 2,
            latitude: 0,
            window: 4,
            n: 3,
            seed: 0,
            samples: 1000,
            caps: BallCaps::default(),
        }
    }
}

impl SuiteConfig {
    pub fn engine(&self) -> Result<Engine> {
        let graph = self.graph.clone().ok_or_else(|| Error::Config("this suite needs --graph".into()))?;
        let model = self.model.clone().ok_or_else(|| Error::Config("this suite needs --model".into()))?;
        Engine::new(model, graph)
    }

    fn graph(&self) -> Result<&Graph> {
        self.graph.as_ref().ok_or_else(|| Error::Config("this suite needs --graph".into()))
    }
}

#[derive(Clone, Debug)]
pub struct Property {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub counterexamples: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub properties: Vec<Property>,
    pub data: Value,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport { suite, properties: Vec::new(), data: json!({}) }
    }

    fn check(&mut self, name: &str, pass: bool, detail: String, counterexamples: Vec<String>) {
        self.properties.push(Property { name: name.into(), pass, detail, counterexamples });
    }

    pub fn pass(&self) -> bool {
        self.properties.iter().all(|p| p.pass)
    }

    pub fn to_json(&self) -> Value {
        let props: Vec<Value> = self
            .properties
            .iter()
            .map(|p| json!({"name": p.name, "pass": p.pass, "detail": p.detail, "counterexamples": p.counterexamples}))
            .collect();
        json!({"suite": self.suite.name(), "pass": self.pass(), "properties": props, "data": self.data})
    }
}

const MAX_COUNTEREXAMPLES: usize = 10;

fn limited(mut v: Vec<String>) -> Vec<String> {
    v.truncate(MAX_COUNTEREXAMPLES);
    v
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteReport> {
    match suite {
        Suite::NormalForm => normal_form(cfg),
        Suite::Stabilisers => stabilisers(cfg),
        Suite::Intersections => intersections(cfg),
        Suite::Nerve => nerve(cfg),
        Suite::Links => links(cfg),
        Suite::Pockets => pockets(cfg),
        Suite::Valleys => valleys(cfg),
        Suite::Sb => sb(cfg),
    }
}

fn ball(cfg: &SuiteConfig, engine: &Engine) -> Result<CubeBall> {
    build_ball(engine, cfg.radius, cfg.caps)
}

/// Rewriting identities on random canonical forms, plus word round trips.
pub fn normal_form(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let e = cfg.engine()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut report = SuiteReport::new(Suite::NormalForm);
    let pool = e.sample_pool();
    let samples: Vec<Element> = (0..cfg.samples)
        .map(|_| {
            if e.kind() == EngineKind::NormalSequences {
                e.random_sequence(&mut rng, 4).map(Element::Seq)
            } else {
                let len = rng.gen_range(0..10);
                Ok(e.from_word(&e.random_word(&mut rng, len, &pool)))
            }
        })
        .collect::<Result<_>>()?;
    let omegas = e.model().o_elements().unwrap_or_else(|| (-3..=3).map(crate::model::UElem::Int).collect());

    let mut inverse_fail = Vec::new();
    let mut twist_fail = Vec::new();
    let mut commute_fail = Vec::new();
    let mut round_trip_fail = Vec::new();
    for g in &samples {
        for v in 0..e.graph().len() {
            for l in [Letter::pos(v), Letter::neg(v)] {
                if e.act(&Sym::Gen(l.inverse()), &e.act(&Sym::Gen(l), g)) != *g {
                    inverse_fail.push(format!("{} on {}", e.raag().format_letter(l), e.format(g)));
                }
            }
            let t = Sym::Gen(Letter::pos(v));
            for w in &omegas {
                let lhs = e.act(&t, &e.act(&Sym::U(w.clone()), g));
                let rhs = e.act(&Sym::U(e.model().phi(w)?), &e.act(&t, g));
                if lhs != rhs {
                    twist_fail.push(format!("{} {} on {}", e.graph().label(v), e.model().format(w), e.format(g)));
                }
            }
        }
        for (a, b) in e.graph().edges() {
            let (sa, sb) = (Sym::Gen(Letter::pos(a)), Sym::Gen(Letter::pos(b)));
            if e.act(&sa, &e.act(&sb, g)) != e.act(&sb, &e.act(&sa, g)) {
                commute_fail.push(format!("[{}, {}] on {}", e.graph().label(a), e.graph().label(b), e.format(g)));
            }
        }
        if e.from_word(&e.word(g)) != *g {
            round_trip_fail.push(e.format(g));
        }
    }
    let n = samples.len();
    report.check("inverse letters cancel", inverse_fail.is_empty(), format!("{n} samples"), limited(inverse_fail));
    report.check("t w = phi(w) t", twist_fail.is_empty(), format!("{n} samples"), limited(twist_fail));
    report.check("edge generators commute", commute_fail.is_empty(), format!("{n} samples"), limited(commute_fail));
    report.check("word round trip", round_trip_fail.is_empty(), format!("{n} samples"), limited(round_trip_fail));
    report.data = json!({"engine": e.kind().to_string(), "samples": n});
    Ok(report)
}

pub fn stabilisers(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let e = cfg.engine()?;
    let b = ball(cfg, &e)?;
    let mut report = SuiteReport::new(Suite::Stabilisers);
    let mut bad = Vec::new();
    for (i, c) in b.cubes.iter().enumerate() {
        if stabiliser_bruteforce(&e, c)? != stabiliser_formula(&e, c)? {
            bad.push(format!("cube {i} at {}", e.format(&c.base)));
        }
    }
    report.check(
        "stabiliser equals g phi^|T|(O) g^-1",
        bad.is_empty(),
        format!("{} cubes", b.cubes.len()),
        limited(bad),
    );
    report.data = json!({"cubes": b.cubes.len()});
    Ok(report)
}

/// Summary of comparing the classification with traces and fixed cells.
#[derive(Clone, Debug, Default)]
pub struct IntersectionSummary {
    pub apartments: usize,
    pub pairs: usize,
    pub disagreements: Vec<String>,
    pub shape_violations: Vec<String>,
    pub tags: std::collections::BTreeMap<&'static str, usize>,
    pub shared_cells: usize,
}

/// Classify `Σ₀ ∩ n_i^-1 n_j Σ₀` for every pair of apartments meeting the ball and compare
/// with the cells both apartments share inside the ball and with the cells of `Σ₀` fixed
/// by `n_i^-1 n_j` up to word length `fixed_radius`.
pub fn intersection_summary(b: &CubeBall, fixed_radius: usize) -> Result<IntersectionSummary> {
    let e = &b.engine;
    let handles = enumerate_apartments(b)?;
    let traces: Vec<Vec<bool>> = handles.iter().map(|h| apartment_trace(b, &h.0)).collect();
    let mut s = IntersectionSummary { apartments: handles.len(), ..Default::default() };
    for i in 0..handles.len() {
        for j in 0..handles.len() {
            if i == j {
                continue;
            }
            let (ni, nj) = (&handles[i].0, &handles[j].0);
            let (class, check) = check_pair(b, ni, nj, &traces[i], &traces[j])?;
            s.pairs += 1;
            s.shared_cells += check.shared_cells;
            *s.tags.entry(class.tag()).or_default() += 1;
            let label = || format!("{} vs {}", e.format(ni), e.format(nj));
            if !check.disagreements.is_empty() {
                s.disagreements.push(format!("{}: {} ball cubes disagree", label(), check.disagreements.len()));
            }
            let n = e.mul(&e.inv(ni), nj);
            if i < j {
                let fixed = fixed_cell_disagreements(e, &n, &class, fixed_radius);
                if !fixed.is_empty() {
                    s.disagreements.push(format!("{}: {} fixed cells disagree", label(), fixed.len()));
                }
            }
            let shape_ok = match (e.kind(), &class) {
                (EngineKind::NormalSequences, IntersectionClass::Empty) => true,
                (EngineKind::NormalSequences, IntersectionClass::VerticesOnly(v)) => v.len() == 1,
                (EngineKind::Semidirect, IntersectionClass::ValleyUnion(l)) => *l == e.epsilon(&n)?,
                _ => false,
            };
            if !shape_ok {
                s.shape_violations.push(format!("{}: {:?}", label(), class));
            }
        }
    }
    Ok(s)
}

pub fn intersections(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let e = cfg.engine()?;
    let b = ball(cfg, &e)?;
    let s = intersection_summary(&b, cfg.radius)?;
    let mut report = SuiteReport::new(Suite::Intersections);
    report.check(
        "classification agrees with brute force",
        s.disagreements.is_empty(),
        format!("{} apartments, {} ordered pairs", s.apartments, s.pairs),
        limited(s.disagreements.clone()),
    );
    let expected = if e.kind() == EngineKind::NormalSequences { "empty or one vertex" } else { "valley at latitude epsilon(n)" };
    report.check(
        &format!("intersections are {expected}"),
        s.shape_violations.is_empty(),
        format!("{:?}", s.tags),
        limited(s.shape_violations.clone()),
    );
    report.data = json!({"apartments": s.apartments, "pairs": s.pairs, "classes": s.tags, "shared_cells": s.shared_cells});
    Ok(report)
}

pub fn nerve(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let e = cfg.engine()?;
    let b = ball(cfg, &e)?;
    let (g, handles) = nerve_graph(&b)?;
    let mut report = SuiteReport::new(Suite::Nerve);
    let n = g.len();
    let edges = g.edges().len();
    match e.kind() {
        EngineKind::Semidirect => {
            report.check("nerve is complete", edges == n * (n - 1) / 2, format!("{n} apartments, {edges} edges"), vec![]);
        }
        _ => {
            let ch = g.chordality();
            let cex = match &ch {
                Chordality::NotChordal { induced_cycle } => {
                    vec![induced_cycle.iter().map(|&i| e.format(&handles[i].0)).collect::<Vec<_>>().join(" -> ")]
                }
                Chordality::Chordal { .. } => vec![],
            };
            report.check("nerve is chordal", ch.is_chordal(), format!("{n} apartments, {edges} edges"), cex);
        }
    }
    report.data = json!({"apartments": n, "edges": edges});
    Ok(report)
}

pub fn links(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let e = cfg.engine()?;
    let b = ball(cfg, &e)?;
    let r = check_links(&b)?;
    let mut report = SuiteReport::new(Suite::Links);
    let fmt_v = |v: usize| e.format(&b.vertices[v].rep);
    report.check(
        "links of interior vertices are flag simplicial complexes",
        r.links_ok(),
        format!("{} interior vertices", r.interior_vertices),
        limited(
            r.non_simplicial
                .iter()
                .map(|&v| format!("non-simplicial link at {}", fmt_v(v)))
                .chain(r.non_flag.iter().map(|(v, s)| format!("empty simplex {s:?} at {}", fmt_v(*v))))
                .collect(),
        ),
    );
    report.check(
        "cubes meet in common faces",
        r.faces_ok(),
        format!("{} cubes", b.cubes.len()),
        limited(r.face_violations.iter().map(|(a, c)| format!("cubes {a} and {c}")).collect()),
    );
    report.data = json!({"interior_vertices": r.interior_vertices});
    Ok(report)
}

/// The squares `Q_T` and `φ(u) Q_T` for the first edge `T` of the graph and `u` the first
/// element of `O` outside `φ(O)`. In the shift model these share the two edges at `1U` and
/// differ at the far corner, so they form a pocket.
pub fn pocket_witness(b: &CubeBall) -> Option<(usize, usize)> {
    let e = &b.engine;
    let (x, y) = *e.graph().edges().first()?;
    let model = e.model();
    let u0 = model.left_transversal(Subgroup::PhiO).into_iter().find(|u| !model.is_identity(u) && model.in_o(u))?;
    let u = model.phi(&u0).ok()?;
    let q = b.cube_at(&e.identity(), &[x, y])?;
    let uq = b.cube_at(&e.from_u(&u), &[x, y])?;
    Some((q.min(uq), q.max(uq)))
}

pub fn pockets(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let e = cfg.engine()?;
    let b = ball(cfg, &e)?;
    let found = detect_pockets(&b);
    let mut report = SuiteReport::new(Suite::Pockets);
    let describe = |sq: usize| {
        let c = &b.cubes[sq];
        format!("{} Q_{{{}}}", e.format(&c.base), c.cube_type.iter().map(|&t| e.graph().label(t)).collect::<Vec<_>>().join(","))
    };
    let listed: Vec<String> =
        found.iter().map(|p| format!("{} / {}", describe(p.squares.0), describe(p.squares.1))).collect();
    if e.kind() == EngineKind::Semidirect && !e.graph().is_edgeless() {
        let witness = pocket_witness(&b);
        let hit = witness.is_some_and(|w| found.iter().any(|p| p.squares == w));
        report.check("pockets exist", !found.is_empty(), format!("{} pockets", found.len()), limited(listed.clone()));
        report.check(
            "Q and u Q form a pocket",
            hit,
            witness.map_or("witness squares not in ball".into(), |(a, c)| format!("{} / {}", describe(a), describe(c))),
            vec![],
        );
    } else {
        report.check("no pockets", found.is_empty(), format!("{} pockets", found.len()), limited(listed.clone()));
        let r = check_links(&b)?;
        report.check("flag links", r.links_ok(), format!("{} interior vertices", r.interior_vertices), vec![]);
        report.check("common faces", r.faces_ok(), format!("{} violations", r.face_violations.len()), vec![]);
    }
    report.data = json!({"pockets": found.len(), "examples": limited(listed)});
    Ok(report)
}

/// Zero pattern of `H̃_0, H̃_1`.
fn low_zero_pattern(h: &HomologyResult) -> [bool; 2] {
    [0, 1].map(|d| h.degrees.get(d).map_or(true, |x| x.is_zero()))
}

/// Truncated valley homology at two consecutive radii.
#[derive(Clone, Debug)]
pub struct ValleyStudy {
    pub radii: [usize; 2],
    pub homology: [HomologyResult; 2],
    pub cells: [usize; 2],
    pub link: HomologyResult,
    pub stabilised: bool,
}

impl ValleyStudy {
    pub fn h(&self, i: usize, d: usize) -> usize {
        self.homology[i].betti(d) + self.homology[i].degrees.get(d).map_or(0, |x| x.torsion.len())
    }
}

/// Reduced homology of the valley at latitude `t` truncated at radius `r` and `r + 1`, and of
/// the flag complex of the graph. Stabilised means the zero pattern of `H̃_0, H̃_1` agrees.
pub fn valley_study(graph: &Graph, t: i64, r: usize) -> Result<ValleyStudy> {
    let run = |radius: usize| -> Result<(HomologyResult, usize)> {
        let cells = valley_truncation(graph, t, radius)?;
        let cc = chain_complex(&valley_complex(graph, &cells))?;
        if !cc.check_d_squared() {
            return Err(Error::NonClosedComplex("boundary does not square to zero".into()));
        }
        Ok((reduced_homology(&cc), cells.len()))
    };
    let (h0, c0) = run(r)?;
    let (h1, c1) = run(r + 1)?;
    let link = reduced_homology(&simplicial_chain_complex(&graph.clique_complex())?);
    let stabilised = low_zero_pattern(&h0) == low_zero_pattern(&h1);
    Ok(ValleyStudy { radii: [r, r + 1], homology: [h0, h1], cells: [c0, c1], link, stabilised })
}

pub fn valleys(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let g = cfg.graph()?;
    let v = valley_study(g, cfg.latitude, cfg.window)?;
    let mut report = SuiteReport::new(Suite::Valleys);
    report.check(
        "stabilised across consecutive radii",
        v.stabilised,
        format!("H~0,H~1 ranks {:?} at r={} and {:?} at r={}", [v.h(0, 0), v.h(0, 1)], v.radii[0], [v.h(1, 0), v.h(1, 1)], v.radii[1]),
        vec![],
    );
    report.check("truncated valley is connected", v.h(0, 0) == 0 && v.h(1, 0) == 0, String::new(), vec![]);
    let link_pattern = low_zero_pattern(&v.link);
    let trunc_pattern = low_zero_pattern(&v.homology[1]);
    report.check(
        "H~0, H~1 vanish exactly where they vanish for the flag complex of the graph",
        v.stabilised && link_pattern == trunc_pattern,
        format!("link {:?}, truncation {:?}", link_pattern, trunc_pattern),
        vec![],
    );
    report.data = json!({
        "radii": v.radii,
        "cells": v.cells,
        "homology": [v.homology[0].to_json(), v.homology[1].to_json()],
        "link_homology": v.link.to_json(),
        "link_connectivity": homological_connectivity(&v.link).to_json(),
    });
    Ok(report)
}

pub fn sb(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let n = cfg.n;
    let mut report = SuiteReport::new(Suite::Sb);
    let h = qcalc::sb_homology(n);
    report.check("dH_0 = 1", h.get(0) == DimValue::Finite(1), String::new(), vec![]);
    report.check(&format!("dH_{} infinite", n + 1), h.get(n + 1) == DimValue::Infinite, String::new(), vec![]);
    let above: Vec<String> =
        (n + 2..n + 12).filter(|&d| !h.get(d).is_zero()).map(|d| format!("degree {d}: {}", h.get(d))).collect();
    report.check("zero above degree n+1", above.is_empty(), "checked ten degrees".into(), above);
    report.check(
        "degrees 1..n left unknown",
        (1..=n).all(|d| h.get(d) == DimValue::Unknown),
        String::new(),
        vec![],
    );
    let bs = GradedDim::from_counts(&[1, 1]);
    let chi = qcalc::hnn_euler(Ratio::from_integer(1), Ratio::from_integer(1), 1);
    report.check(
        "Euler characteristic of one HNN extension of a Q-acyclic group",
        qcalc::euler_characteristic(&bs).map(Ratio::from_integer) == Some(chi),
        format!("chi = {chi}, table {bs}"),
        vec![],
    );
    report.data = json!({"n": n, "homology": h.to_json()});
    Ok(report)
}
