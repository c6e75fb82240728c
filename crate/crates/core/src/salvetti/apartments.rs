//! Apartments `nΣ₀`, the classification of `Σ₀ ∩ nΣ₀`, and the apartment nerve.

use std::collections::BTreeSet;

use crate::elements::{Element, Engine, EngineKind};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::model::Latitude;
use crate::raag::NormalWord;

use super::{clique_products, CubeBall};

/// An apartment `nΣ₀`, with `n` reduced modulo the pointwise stabiliser of `Σ₀`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ApartmentHandle(pub Element);

/// Shape of `Σ₀ ∩ nΣ₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntersectionClass {
    Empty,
    /// Vertices `aU` of `Σ₀`, listed by `a`.
    VerticesOnly(Vec<NormalWord>),
    /// Every cell `aQ_T` with `e(a) + |T|` at most the latitude.
    ValleyUnion(Latitude),
}

impl IntersectionClass {
    /// Whether the cell `aQ_T` of `Σ₀` belongs to the predicted intersection.
    pub fn contains_cell(&self, a: &NormalWord, dim: usize) -> bool {
        match self {
            IntersectionClass::Empty => false,
            IntersectionClass::VerticesOnly(vs) => dim == 0 && vs.contains(a),
            IntersectionClass::ValleyUnion(lat) => lat.admits(a.exponent() + dim as i64),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, IntersectionClass::Empty)
    }

    pub fn tag(&self) -> &'static str {
        match self {
            IntersectionClass::Empty => "empty",
            IntersectionClass::VerticesOnly(_) => "vertices",
            IntersectionClass::ValleyUnion(_) => "valley",
        }
    }
}

fn require_classifiable(engine: &Engine) -> Result<()> {
    match engine.kind() {
        EngineKind::NormalSequences | EngineKind::Semidirect => Ok(()),
        EngineKind::Britton => Err(Error::RegimeMismatch(
            "apartment intersections need phi(O) = O or the shift model over a connected graph".into(),
        )),
    }
}

/// Canonical handle of the apartment `nΣ₀`.
pub fn handle_of(engine: &Engine, n: &Element) -> Result<ApartmentHandle> {
    require_classifiable(engine)?;
    match engine.kind() {
        EngineKind::NormalSequences => {
            let os = engine.model().o_elements().expect("finite model");
            let best = os.iter().map(|w| engine.mul(n, &engine.from_u(w))).min().expect("O is non-empty");
            Ok(ApartmentHandle(best))
        }
        _ => Ok(ApartmentHandle(n.clone())),
    }
}

/// Apartment through the cube or vertex with base element `g`.
pub fn apartment_of(engine: &Engine, g: &Element) -> Result<ApartmentHandle> {
    handle_of(engine, &engine.n_part(g))
}

/// Apartments obtained from the base elements of all ball cubes, sorted.
pub fn enumerate_apartments(ball: &CubeBall) -> Result<Vec<ApartmentHandle>> {
    let mut set = BTreeSet::new();
    for c in &ball.cubes {
        set.insert(apartment_of(&ball.engine, &c.base)?);
    }
    Ok(set.into_iter().collect())
}

/// Whether the vertex `gU` lies in `nΣ₀`: with `n^-1 g = n' a'`, this holds iff `a'^-1 n' a' ∈ U`.
pub fn vertex_in_apartment(engine: &Engine, n: &Element, g: &Element) -> bool {
    let h = engine.mul(&engine.inv(n), g);
    let a = engine.of_artin(&engine.a_part(&h));
    let np = engine.n_part(&h);
    engine.as_u(&engine.mul(&engine.inv(&a), &engine.mul(&np, &a))).is_some()
}

/// Ball vertices in `nΣ₀`.
pub fn apartment_trace(ball: &CubeBall, n: &Element) -> Vec<bool> {
    ball.vertices.iter().map(|v| vertex_in_apartment(&ball.engine, n, &v.rep)).collect()
}

/// Classify `Σ₀ ∩ nΣ₀` for `n` in the normal closure of `U`.
pub fn classify_intersection(engine: &Engine, n: &Element) -> Result<IntersectionClass> {
    require_classifiable(engine)?;
    if !engine.a_part(n).is_empty() {
        return Err(Error::RegimeMismatch("element is not in the normal closure of U".into()));
    }
    match n {
        Element::Semi(_) => Ok(IntersectionClass::ValleyUnion(engine.epsilon(n)?)),
        Element::Seq(s) => {
            let model = engine.model();
            match s.tail.len() {
                0 if model.in_o(&s.head) => Ok(IntersectionClass::ValleyUnion(Latitude::PlusInfinity)),
                0 => Ok(IntersectionClass::VerticesOnly(vec![NormalWord::identity()])),
                2 => {
                    let (a, u1) = &s.tail[0];
                    let (b, u2) = &s.tail[1];
                    let a_inv = engine.raag().invert(a)?;
                    if model.in_o(&s.head) && *b == a_inv && model.is_identity(u2) && !model.is_identity(u1) {
                        Ok(IntersectionClass::VerticesOnly(vec![a.clone()]))
                    } else {
                        Ok(IntersectionClass::Empty)
                    }
                }
                _ => Ok(IntersectionClass::Empty),
            }
        }
        Element::Britton(_) => unreachable!("checked above"),
    }
}

/// Cells `aQ_T` of `Σ₀` with `|a| <= radius`, as `(a, T)`.
pub fn sigma0_cells(graph: &Graph, engine: &Engine, radius: usize) -> Vec<(NormalWord, Vec<usize>)> {
    let ball = engine.raag().ball(radius);
    let cliques = graph.cliques();
    let mut out = Vec::new();
    for a in &ball {
        for t in &cliques.cliques {
            out.push((a.clone(), t.clone()));
        }
    }
    out
}

/// Whether `n` fixes every corner of the cell `aQ_T`.
pub fn fixes_cell(engine: &Engine, n: &Element, a: &NormalWord, t: &[usize]) -> bool {
    let ga = engine.of_artin(a);
    clique_products(engine, t).iter().all(|p| {
        let c = engine.mul(&ga, p);
        engine.as_u(&engine.mul(&engine.inv(&c), &engine.mul(n, &c))).is_some()
    })
}

/// Disagreements between a predicted class and the cells of `Σ₀` fixed by `n`.
pub fn fixed_cell_disagreements(
    engine: &Engine,
    n: &Element,
    class: &IntersectionClass,
    radius: usize,
) -> Vec<(NormalWord, Vec<usize>)> {
    sigma0_cells(engine.graph(), engine, radius)
        .into_iter()
        .filter(|(a, t)| fixes_cell(engine, n, a, t) != class.contains_cell(a, t.len()))
        .collect()
}

/// Result of comparing a classification with the actual traces of two apartments in a ball.
#[derive(Clone, Debug, Default)]
pub struct PairCheck {
    pub cells_checked: usize,
    pub shared_cells: usize,
    pub shared_vertices: usize,
    pub disagreements: Vec<usize>,
}

/// Compare the classification of `n_i^-1 n_j` with the cubes of the ball lying in both
/// `n_iΣ₀` and `n_jΣ₀`.
pub fn check_pair(
    ball: &CubeBall,
    ni: &Element,
    nj: &Element,
    trace_i: &[bool],
    trace_j: &[bool],
) -> Result<(IntersectionClass, PairCheck)> {
    let e = &ball.engine;
    let n = e.mul(&e.inv(ni), nj);
    let class = classify_intersection(e, &n)?;
    let ni_inv = e.inv(ni);
    let mut check = PairCheck::default();
    for (ci, c) in ball.cubes.iter().enumerate() {
        if !c.corners.iter().all(|&v| trace_i[v]) {
            continue;
        }
        check.cells_checked += 1;
        let actual = c.corners.iter().all(|&v| trace_j[v]);
        let a = e.a_part(&e.mul(&ni_inv, &ball.vertices[c.min_corner()].rep));
        if actual {
            check.shared_cells += 1;
            if c.dim() == 0 {
                check.shared_vertices += 1;
            }
        }
        if actual != class.contains_cell(&a, c.dim()) {
            check.disagreements.push(ci);
        }
    }
    Ok((class, check))
}

/// Nerve of the apartments meeting the ball: an edge joins two apartments whose
/// intersection is non-empty.
pub fn nerve_graph(ball: &CubeBall) -> Result<(Graph, Vec<ApartmentHandle>)> {
    let handles = enumerate_apartments(ball)?;
    let e = &ball.engine;
    let mut edges = Vec::new();
    for i in 0..handles.len() {
        let inv = e.inv(&handles[i].0);
        for j in i + 1..handles.len() {
            let class = classify_intersection(e, &e.mul(&inv, &handles[j].0))?;
            if !class.is_empty() {
                edges.push((i, j));
            }
        }
    }
    Ok((Graph::from_edges(handles.len(), &edges), handles))
}
