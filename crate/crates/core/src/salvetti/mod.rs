//! Finite balls in the generalised universal Salvetti complex.
//!
//! Vertices are cosets `gU`, stored through the canonical representative returned by
//! [`Engine::coset_rep`]. A cube of type `T` (a clique) with minimal corner `gU` has
//! corners `g t_X U` for `X ⊆ T`, listed in mask order: bit `i` of the mask says whether
//! the `i`-th vertex of `T` occurs in `X`.

pub mod apartments;
pub mod local;
pub mod stabiliser;
pub mod valley;

use std::collections::{HashMap, VecDeque};

use serde_json::{json, Value};

use crate::elements::{Element, Engine, Sym};
use crate::error::{Error, Result};
use crate::homology::{Cell, CellComplex};
use crate::model::Subgroup;
use crate::raag::{ArtinWord, Letter};

pub use apartments::{classify_intersection, ApartmentHandle, IntersectionClass};
pub use local::{check_links, detect_pockets, LinkReport, Pocket};

/// Upper bounds on ball size.
#[derive(Clone, Copy, Debug)]
pub struct BallCaps {
    pub max_vertices: usize,
    pub max_cubes: usize,
}

impl Default for BallCaps {
    fn default() -> Self {
        BallCaps { max_vertices: 1_000_000, max_cubes: 10_000_000 }
    }
}

#[derive(Clone, Debug)]
pub struct BallVertex {
    pub rep: Element,
    pub exponent: i64,
    pub dist: usize,
}

#[derive(Clone, Debug)]
pub struct Cube {
    /// Clique of the graph, ascending.
    pub cube_type: Vec<usize>,
    /// Vertex ids in mask order; `corners[0]` is the minimal corner.
    pub corners: Vec<usize>,
    /// An element `g` with this cube equal to `g Q_T`.
    pub base: Element,
}

impl Cube {
    pub fn dim(&self) -> usize {
        self.cube_type.len()
    }
    pub fn min_corner(&self) -> usize {
        self.corners[0]
    }
    pub fn verts(&self) -> Vec<usize> {
        let mut v = self.corners.clone();
        v.sort_unstable();
        v
    }
    pub fn mask_of(&self, v: usize) -> Option<usize> {
        self.corners.iter().position(|&c| c == v)
    }
}

/// Full subcomplex on the vertices within a given 1-skeleton distance of `1U`.
#[derive(Clone, Debug)]
pub struct CubeBall {
    pub engine: Engine,
    pub radius: usize,
    pub vertices: Vec<BallVertex>,
    pub cubes: Vec<Cube>,
    vertex_index: HashMap<Element, usize>,
    cube_index: HashMap<Vec<usize>, usize>,
    neighbours: Vec<Vec<usize>>,
    cubes_at: Vec<Vec<usize>>,
}

/// Products `t_X` for every subset `X` of a clique, in mask order.
pub fn clique_products(engine: &Engine, t: &[usize]) -> Vec<Element> {
    (0..1usize << t.len())
        .map(|mask| {
            let letters: Vec<Letter> =
                t.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &g)| Letter::pos(g)).collect();
            let w = engine.raag().normal_form(&ArtinWord(letters)).expect("short word");
            engine.of_artin(&w)
        })
        .collect()
}

pub fn build_ball(engine: &Engine, radius: usize, caps: BallCaps) -> Result<CubeBall> {
    let model = engine.model();
    let mut steps: Vec<Element> = Vec::new();
    for v in 0..engine.graph().len() {
        for u in model.left_transversal(Subgroup::PhiO) {
            steps.push(engine.from_word(&[Sym::U(u), Sym::Gen(Letter::pos(v))]));
        }
        for u in model.left_transversal(Subgroup::O) {
            steps.push(engine.from_word(&[Sym::U(u), Sym::Gen(Letter::neg(v))]));
        }
    }

    let root = engine.coset_rep(&engine.identity());
    let mut vertices = vec![BallVertex { exponent: engine.exponent(&root), rep: root.clone(), dist: 0 }];
    let mut vertex_index = HashMap::from([(root, 0usize)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if vertices[i].dist == radius {
            continue;
        }
        let g = vertices[i].rep.clone();
        for step in &steps {
            let h = engine.coset_rep(&engine.mul(&g, step));
            if vertex_index.contains_key(&h) {
                continue;
            }
            if vertices.len() >= caps.max_vertices {
                return Err(Error::ResourceCap(format!("more than {} vertices", caps.max_vertices)));
            }
            let id = vertices.len();
            vertex_index.insert(h.clone(), id);
            vertices.push(BallVertex { exponent: engine.exponent(&h), rep: h, dist: vertices[i].dist + 1 });
            queue.push_back(id);
        }
    }

    let mut ball = CubeBall {
        engine: engine.clone(),
        radius,
        vertices,
        cubes: Vec::new(),
        vertex_index,
        cube_index: HashMap::new(),
        neighbours: Vec::new(),
        cubes_at: Vec::new(),
    };
    for (i, v) in ball.vertices.iter().enumerate() {
        ball.cube_index.insert(vec![i], ball.cubes.len());
        ball.cubes.push(Cube { cube_type: vec![], corners: vec![i], base: v.rep.clone() });
    }
    let cliques: Vec<Vec<usize>> = engine.graph().cliques().nonempty().cloned().collect();
    for t in &cliques {
        let prods = clique_products(engine, t);
        let offsets = model.cube_offsets(t.len() as u32);
        for vid in 0..ball.vertices.len() {
            let g = ball.vertices[vid].rep.clone();
            for u in &offsets {
                let h = engine.mul(&g, &engine.from_u(u));
                let mut corners = Vec::with_capacity(prods.len());
                for p in &prods {
                    match ball.vertex_of(&engine.mul(&h, p)) {
                        Some(c) => corners.push(c),
                        None => break,
                    }
                }
                if corners.len() < prods.len() {
                    continue;
                }
                let mut key = corners.clone();
                key.sort_unstable();
                if ball.cube_index.contains_key(&key) {
                    continue;
                }
                if ball.cubes.len() >= caps.max_cubes {
                    return Err(Error::ResourceCap(format!("more than {} cubes", caps.max_cubes)));
                }
                ball.cube_index.insert(key, ball.cubes.len());
                ball.cubes.push(Cube { cube_type: t.clone(), corners, base: h });
            }
        }
    }
    let n = ball.vertices.len();
    ball.neighbours = vec![Vec::new(); n];
    ball.cubes_at = vec![Vec::new(); n];
    for (ci, c) in ball.cubes.iter().enumerate() {
        if c.dim() == 1 {
            ball.neighbours[c.corners[0]].push(c.corners[1]);
            ball.neighbours[c.corners[1]].push(c.corners[0]);
        }
        if c.dim() >= 1 {
            for &v in &c.corners {
                ball.cubes_at[v].push(ci);
            }
        }
    }
    Ok(ball)
}

impl CubeBall {
    /// Ball vertex containing `g U`, if inside the ball.
    pub fn vertex_of(&self, g: &Element) -> Option<usize> {
        self.vertex_index.get(&self.engine.coset_rep(g)).copied()
    }

    pub fn cube_with_verts(&self, verts: &[usize]) -> Option<usize> {
        let mut key = verts.to_vec();
        key.sort_unstable();
        self.cube_index.get(&key).copied()
    }

    /// The cube `g Q_T`, if all of its corners lie in the ball.
    pub fn cube_at(&self, g: &Element, t: &[usize]) -> Option<usize> {
        let corners: Option<Vec<usize>> =
            clique_products(&self.engine, t).iter().map(|p| self.vertex_of(&self.engine.mul(g, p))).collect();
        self.cube_with_verts(&corners?)
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.neighbours[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbours[v].len()
    }

    /// Cubes of positive dimension containing `v`.
    pub fn cubes_at(&self, v: usize) -> &[usize] {
        &self.cubes_at[v]
    }

    /// Whether every cube through `v` lies in the ball.
    pub fn is_interior(&self, v: usize) -> bool {
        self.vertices[v].dist + self.engine.graph().clique_number() <= self.radius
    }

    pub fn dimension(&self) -> usize {
        self.cubes.iter().map(Cube::dim).max().unwrap_or(0)
    }

    /// Number of cubes in each dimension.
    pub fn counts(&self) -> Vec<usize> {
        let mut out = vec![0; self.dimension() + 1];
        for c in &self.cubes {
            out[c.dim()] += 1;
        }
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts().iter().enumerate().map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
    }

    /// Cell complex of the cubes selected by `keep`. The selection must be closed under faces
    /// for homology to be defined.
    pub fn cell_complex_filtered<F: Fn(&Cube) -> bool>(&self, keep: F) -> CellComplex {
        CellComplex::new(self.cubes.iter().filter(|c| keep(c)).map(|c| Cell { corners: c.corners.clone() }).collect())
    }

    pub fn cell_complex(&self) -> CellComplex {
        self.cell_complex_filtered(|_| true)
    }

    /// Largest corner exponent of a cube.
    pub fn top_exponent(&self, c: &Cube) -> i64 {
        self.vertices[c.min_corner()].exponent + c.dim() as i64
    }

    pub fn export_json(&self, model_desc: Value) -> Value {
        let g = self.engine.graph();
        let vertices: Vec<Value> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| json!({"id": i, "rep": self.engine.word_string(&v.rep), "exp": v.exponent, "dist": v.dist}))
            .collect();
        let cubes: Vec<Value> = self
            .cubes
            .iter()
            .map(|c| {
                json!({
                    "dim": c.dim(),
                    "type": c.cube_type.iter().map(|&t| g.label(t)).collect::<Vec<_>>(),
                    "verts": c.verts(),
                    "corners": c.corners,
                    "min_corner": c.min_corner(),
                })
            })
            .collect();
        json!({
            "vertices": vertices,
            "cubes": cubes,
            "meta": {
                "model": model_desc,
                "graph": serde_json::to_value(g.to_raw()).expect("graph serialises"),
                "radius": self.radius,
                "engine": self.engine.kind().to_string(),
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::model::BaseModel;

    fn ball(model: BaseModel, g: Graph, r: usize) -> CubeBall {
        build_ball(&Engine::new(model, g).unwrap(), r, BallCaps::default()).unwrap()
    }

    #[test]
    fn small_balls() {
        let point = Graph::new(&["s"], &[]).unwrap();
        let edge = Graph::new(&["s", "t"], &[("s", "t")]).unwrap();
        let b = ball(BaseModel::shift(2).unwrap(), point, 1);
        assert_eq!(b.counts(), vec![4, 3]);
        let b = ball(BaseModel::shift(2).unwrap(), edge.clone(), 1);
        assert_eq!(b.counts(), vec![7, 6]);
        let b = ball(BaseModel::trivial(), edge.clone(), 1);
        assert_eq!(b.counts()[0], 5);
        let b = ball(BaseModel::trivial(), edge, 2);
        // Z^2: 13 points, 16 unit edges and 4 squares inside the l1 ball of radius 2.
        assert_eq!(b.counts(), vec![13, 16, 4]);
        assert_eq!(b.euler_characteristic(), 1);
    }

    #[test]
    fn caps_enforced() {
        let edge = Graph::new(&["s", "t"], &[("s", "t")]).unwrap();
        let e = Engine::new(BaseModel::shift(2).unwrap(), edge).unwrap();
        let r = build_ball(&e, 3, BallCaps { max_vertices: 10, max_cubes: 100 });
        assert!(matches!(r, Err(Error::ResourceCap(_))));
    }
}
