//! Local geometry of a ball: pockets, vertex links and the common-face condition.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::graph::Graph;

use super::CubeBall;

/// Two squares sharing exactly two adjacent edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pocket {
    pub squares: (usize, usize),
    pub shared_edges: Vec<usize>,
}

fn square_edges(ball: &CubeBall, sq: usize) -> Vec<usize> {
    let c = &ball.cubes[sq].corners;
    [(0, 1), (0, 2), (1, 3), (2, 3)]
        .iter()
        .map(|&(a, b)| ball.cube_with_verts(&[c[a], c[b]]).expect("faces of ball cubes lie in the ball"))
        .collect()
}

pub fn detect_pockets(ball: &CubeBall) -> Vec<Pocket> {
    let squares: Vec<usize> = (0..ball.cubes.len()).filter(|&i| ball.cubes[i].dim() == 2).collect();
    let mut by_edge: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut edges_of = HashMap::new();
    for &sq in &squares {
        let es = square_edges(ball, sq);
        for &e in &es {
            by_edge.entry(e).or_default().push(sq);
        }
        edges_of.insert(sq, es);
    }
    let mut shared: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (e, sqs) in &by_edge {
        for (i, &a) in sqs.iter().enumerate() {
            for &b in &sqs[i + 1..] {
                shared.entry((a.min(b), a.max(b))).or_default().push(*e);
            }
        }
    }
    let mut out = Vec::new();
    for ((a, b), mut es) in shared {
        if es.len() != 2 {
            continue;
        }
        es.sort_unstable();
        let (e1, e2) = (&ball.cubes[es[0]].corners, &ball.cubes[es[1]].corners);
        if e1.iter().any(|v| e2.contains(v)) {
            out.push(Pocket { squares: (a, b), shared_edges: es });
        }
    }
    out
}

/// Outcome of the link and face checks.
#[derive(Clone, Debug, Default)]
pub struct LinkReport {
    pub interior_vertices: usize,
    /// Interior vertices whose link has two cubes inducing the same simplex.
    pub non_simplicial: Vec<usize>,
    /// Interior vertices whose link has a clique spanning no simplex.
    pub non_flag: Vec<(usize, Vec<usize>)>,
    /// Pairs of cubes meeting in a vertex set that is not a common face.
    pub face_violations: Vec<(usize, usize)>,
}

impl LinkReport {
    pub fn links_ok(&self) -> bool {
        self.non_simplicial.is_empty() && self.non_flag.is_empty()
    }
    pub fn faces_ok(&self) -> bool {
        self.face_violations.is_empty()
    }
}

/// Whether a set of corner masks of a cube spans a face of it.
pub fn masks_form_face(masks: &[usize]) -> bool {
    let and_all = masks.iter().fold(!0usize, |acc, &m| acc & m);
    let or_all = masks.iter().fold(0usize, |acc, &m| acc | m);
    let free = or_all ^ and_all;
    masks.len() == 1 << free.count_ones() && masks.iter().all(|&m| m & !free == and_all)
}

/// Link of an interior vertex: simplices given as sets of edge-cube ids.
pub fn link_simplices(ball: &CubeBall, v: usize) -> Vec<(usize, Vec<usize>)> {
    ball.cubes_at(v)
        .iter()
        .map(|&ci| {
            let c = &ball.cubes[ci];
            let mv = c.mask_of(v).expect("vertex of cube");
            let mut edges: Vec<usize> = (0..c.dim())
                .map(|i| ball.cube_with_verts(&[v, c.corners[mv ^ (1 << i)]]).expect("edge in ball"))
                .collect();
            edges.sort_unstable();
            (ci, edges)
        })
        .collect()
}

pub fn check_links(ball: &CubeBall) -> Result<LinkReport> {
    let mut report = LinkReport::default();
    for v in 0..ball.vertices.len() {
        if !ball.is_interior(v) {
            continue;
        }
        report.interior_vertices += 1;
        let simplices = link_simplices(ball, v);
        let mut seen = BTreeSet::new();
        if simplices.iter().any(|(_, s)| !seen.insert(s.clone())) {
            report.non_simplicial.push(v);
        }
        let verts: Vec<usize> = simplices.iter().filter(|(_, s)| s.len() == 1).map(|(_, s)| s[0]).collect();
        let pos: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut lg = Graph::edgeless(verts.len());
        for (_, s) in simplices.iter().filter(|(_, s)| s.len() == 2) {
            lg = lg.with_edge(pos[&s[0]], pos[&s[1]]);
        }
        for clique in lg.cliques().cliques.iter().filter(|c| c.len() >= 3) {
            let mut edge_set: Vec<usize> = clique.iter().map(|&i| verts[i]).collect();
            edge_set.sort_unstable();
            if !seen.contains(&edge_set) {
                report.non_flag.push((v, edge_set));
            }
        }
    }
    if report.interior_vertices == 0 {
        return Err(Error::NoInteriorVertices);
    }
    report.face_violations = face_violations(ball);
    Ok(report)
}

/// Pairs of cubes of positive dimension whose common vertices do not form a face of both.
pub fn face_violations(ball: &CubeBall) -> Vec<(usize, usize)> {
    let mut pairs = BTreeSet::new();
    for v in 0..ball.vertices.len() {
        let cs = ball.cubes_at(v);
        for (i, &a) in cs.iter().enumerate() {
            for &b in &cs[i + 1..] {
                pairs.insert((a.min(b), a.max(b)));
            }
        }
    }
    pairs
        .into_iter()
        .filter(|&(a, b)| {
            let (ca, cb) = (&ball.cubes[a], &ball.cubes[b]);
            let shared: Vec<usize> = ca.corners.iter().copied().filter(|v| cb.corners.contains(v)).collect();
            let ma: Vec<usize> = shared.iter().map(|&v| ca.mask_of(v).unwrap()).collect();
            let mb: Vec<usize> = shared.iter().map(|&v| cb.mask_of(v).unwrap()).collect();
            !(masks_form_face(&ma) && masks_form_face(&mb))
        })
        .collect()
}
