//! Finite simplicial graphs, cliques, clique complexes and chordality.
//!
//! Vertices are string labels. The order in which vertices were supplied is the
//! total order used for every tie-break elsewhere in the crate.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Raw graph document as read from JSON.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawGraph {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<[String; 2]>,
}

/// A finite simplicial graph with ordered, uniquely labelled vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    adj: Vec<Vec<bool>>,
}

/// A perfect elimination ordering or an induced cycle of length at least four.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Chordality {
    Chordal { elimination_order: Vec<usize> },
    NotChordal { induced_cycle: Vec<usize> },
}

impl Chordality {
    pub fn is_chordal(&self) -> bool {
        matches!(self, Chordality::Chordal { .. })
    }
}

/// Downward closed family of cliques, each stored as a sorted vertex list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueFamily {
    pub cliques: Vec<Vec<usize>>,
}

impl CliqueFamily {
    pub fn len(&self) -> usize {
        self.cliques.len()
    }
    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }
    /// Size of the largest clique.
    pub fn max_size(&self) -> usize {
        self.cliques.iter().map(Vec::len).max().unwrap_or(0)
    }
    /// Non-empty cliques only.
    pub fn nonempty(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.cliques.iter().filter(|c| !c.is_empty())
    }
}

/// Simplicial complex given by its simplices (non-empty vertex sets).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    pub simplices: BTreeSet<Vec<usize>>,
}

impl SimplicialComplex {
    /// Dimension, or -1 for the empty complex.
    pub fn dimension(&self) -> i64 {
        self.simplices.iter().map(|s| s.len() as i64 - 1).max().unwrap_or(-1)
    }

    pub fn is_downward_closed(&self) -> bool {
        self.simplices.iter().all(|s| {
            s.len() == 1
                || (0..s.len()).all(|i| {
                    let mut f = s.clone();
                    f.remove(i);
                    self.simplices.contains(&f)
                })
        })
    }
}

impl Graph {
    /// Validate a raw vertex/edge description. Repeated edges are merged.
    pub fn from_raw(raw: &RawGraph) -> Result<Graph> {
        let mut index = HashMap::new();
        for (i, v) in raw.vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        let n = raw.vertices.len();
        let mut adj = vec![vec![false; n]; n];
        for [a, b] in &raw.edges {
            let ia = *index.get(a).ok_or_else(|| Error::UnknownEndpoint(a.clone()))?;
            let ib = *index.get(b).ok_or_else(|| Error::UnknownEndpoint(b.clone()))?;
            if ia == ib {
                return Err(Error::SelfLoop(a.clone()));
            }
            adj[ia][ib] = true;
            adj[ib][ia] = true;
        }
        Ok(Graph { labels: raw.vertices.clone(), adj })
    }

    /// Convenience constructor from string slices.
    pub fn new(vertices: &[&str], edges: &[(&str, &str)]) -> Result<Graph> {
        Graph::from_raw(&RawGraph {
            vertices: vertices.iter().map(|s| s.to_string()).collect(),
            edges: edges.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect(),
        })
    }

    pub fn from_json(text: &str) -> Result<Graph> {
        let raw: RawGraph =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("graph JSON: {e}")))?;
        Graph::from_raw(&raw)
    }

    pub fn to_raw(&self) -> RawGraph {
        RawGraph { vertices: self.labels.clone(), edges: self.edges().into_iter().map(|(a, b)| [self.labels[a].clone(), self.labels[b].clone()]).collect() }
    }

    pub fn edgeless(n: usize) -> Graph {
        let labels: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        Graph { labels, adj: vec![vec![false; n]; n] }
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::edgeless(n);
        for i in 0..n {
            for j in 0..n {
                g.adj[i][j] = i != j;
            }
        }
        g
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a][b]
    }

    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        (0..self.len()).filter(|&w| self.adj[v][w]).collect()
    }

    /// Edges as index pairs (a < b) in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            for b in a + 1..self.len() {
                if self.adj[a][b] {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn is_edgeless(&self) -> bool {
        self.edges().is_empty()
    }

    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(i, &a)| set[i + 1..].iter().all(|&b| self.adj[a][b]))
    }

    /// All cliques, including the empty one, listed by size and then lexicographically.
    pub fn cliques(&self) -> CliqueFamily {
        let mut out = vec![Vec::new()];
        let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for c in &frontier {
                let start = c.last().map_or(0, |&x| x + 1);
                for v in start..self.len() {
                    if c.iter().all(|&w| self.adj[v][w]) {
                        let mut d = c.clone();
                        d.push(v);
                        next.push(d);
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        CliqueFamily { cliques: out }
    }

    /// The flag complex whose simplices are the non-empty cliques.
    pub fn clique_complex(&self) -> SimplicialComplex {
        SimplicialComplex { simplices: self.cliques().nonempty().cloned().collect() }
    }

    /// Largest clique size, which is the dimension of the Salvetti complex.
    pub fn clique_number(&self) -> usize {
        self.cliques().max_size()
    }

    /// Induced subgraph on the given vertices, kept in ascending order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut vs = vertices.to_vec();
        vs.sort_unstable();
        vs.dedup();
        let labels = vs.iter().map(|&v| self.labels[v].clone()).collect();
        let adj = vs.iter().map(|&a| vs.iter().map(|&b| self.adj[a][b]).collect()).collect();
        Graph { labels, adj }
    }

    /// Vertex sets of the connected components, each sorted, ordered by least vertex.
    pub fn component_sets(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for w in 0..self.len() {
                    if self.adj[v][w] && !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn connected_components(&self) -> Vec<Graph> {
        self.component_sets().iter().map(|c| self.induced(c)).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.component_sets().len() <= 1
    }

    /// Join of two graphs with disjoint label sets.
    pub fn join(&self, other: &Graph) -> Result<Graph> {
        for l in &other.labels {
            if self.labels.contains(l) {
                return Err(Error::LabelClash(l.clone()));
            }
        }
        let n1 = self.len();
        let n = n1 + other.len();
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        let mut adj = vec![vec![true; n]; n];
        for a in 0..n {
            adj[a][a] = false;
        }
        for a in 0..n1 {
            for b in 0..n1 {
                adj[a][b] = self.adj[a][b];
            }
        }
        for a in 0..other.len() {
            for b in 0..other.len() {
                adj[n1 + a][n1 + b] = other.adj[a][b];
            }
        }
        Ok(Graph { labels, adj })
    }

    /// Whether `t` is a join factor: every vertex of `t` is adjacent to every vertex outside it.
    pub fn is_join_factor(&self, t: &[usize]) -> bool {
        (0..self.len())
            .filter(|v| !t.contains(v))
            .all(|v| t.iter().all(|&w| self.adj[v][w]))
    }

    /// Chordality test by maximum cardinality search. On failure an induced cycle is returned.
    pub fn chordality(&self) -> Chordality {
        let n = self.len();
        // Maximum cardinality search yields the reverse of a perfect elimination order
        // whenever one exists.
        let mut weight = vec![0usize; n];
        let mut numbered = vec![false; n];
        let mut visit = Vec::with_capacity(n);
        for _ in 0..n {
            let v = (0..n)
                .filter(|&v| !numbered[v])
                .max_by(|&a, &b| weight[a].cmp(&weight[b]).then(b.cmp(&a)))
                .expect("unnumbered vertex");
            numbered[v] = true;
            visit.push(v);
            for w in 0..n {
                if self.adj[v][w] && !numbered[w] {
                    weight[w] += 1;
                }
            }
        }
        let order: Vec<usize> = visit.into_iter().rev().collect();
        if self.is_perfect_elimination_order(&order) {
            return Chordality::Chordal { elimination_order: order };
        }
        match self.find_induced_cycle() {
            Some(c) => Chordality::NotChordal { induced_cycle: c },
            None => unreachable!("search failed on a graph without an elimination order"),
        }
    }

    pub fn is_chordal(&self) -> bool {
        self.chordality().is_chordal()
    }

    /// Whether each vertex's later neighbours form a clique.
    pub fn is_perfect_elimination_order(&self, order: &[usize]) -> bool {
        let mut pos = vec![0; self.len()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        order.iter().all(|&v| {
            let later: Vec<usize> =
                (0..self.len()).filter(|&w| self.adj[v][w] && pos[w] > pos[v]).collect();
            self.is_clique(&later)
        })
    }

    /// Find an induced cycle of length at least four, if any.
    ///
    /// For every vertex `v` with non-adjacent neighbours `a`, `b`, a shortest `a`–`b` path
    /// avoiding the rest of the closed neighbourhood of `v` closes up to a chordless cycle.
    pub fn find_induced_cycle(&self) -> Option<Vec<usize>> {
        let n = self.len();
        for v in 0..n {
            let nb = self.neighbours(v);
            for (i, &a) in nb.iter().enumerate() {
                for &b in &nb[i + 1..] {
                    if self.adj[a][b] {
                        continue;
                    }
                    let blocked: Vec<bool> =
                        (0..n).map(|w| w == v || (self.adj[v][w] && w != a && w != b)).collect();
                    if let Some(path) = self.shortest_path(a, b, &blocked) {
                        let mut cycle = vec![v];
                        cycle.extend(path);
                        return Some(cycle);
                    }
                }
            }
        }
        None
    }

    fn shortest_path(&self, from: usize, to: usize, blocked: &[bool]) -> Option<Vec<usize>> {
        let n = self.len();
        let mut prev = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            if x == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = prev[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for y in 0..n {
                if self.adj[x][y] && !seen[y] && !blocked[y] {
                    seen[y] = true;
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        None
    }

    /// Whether the listed vertices form an induced cycle of length at least four.
    pub fn is_induced_cycle(&self, cycle: &[usize]) -> bool {
        let k = cycle.len();
        if k < 4 {
            return false;
        }
        let distinct: BTreeSet<_> = cycle.iter().collect();
        if distinct.len() != k {
            return false;
        }
        (0..k).all(|i| {
            (0..k).all(|j| {
                let d = (i + k - j) % k;
                let should = d == 1 || d == k - 1;
                i == j || self.adj[cycle[i]][cycle[j]] == should
            })
        })
    }

    /// Add an edge between two existing vertices (used by generators in tests and analysis).
    pub fn with_edge(mut self, a: usize, b: usize) -> Graph {
        assert!(a != b, "self-loop");
        self.adj[a][b] = true;
        self.adj[b][a] = true;
        self
    }

    /// Build a graph on `n` anonymous vertices from an edge list.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Graph {
        edges.iter().fold(Graph::edgeless(n), |g, &(a, b)| g.with_edge(a, b))
    }

    /// Stable textual summary used in reports.
    pub fn describe(&self) -> String {
        let edges: Vec<String> =
            self.edges().iter().map(|&(a, b)| format!("{}-{}", self.labels[a], self.labels[b])).collect();
        format!("V={{{}}} E={{{}}}", self.labels.join(","), edges.join(","))
    }
}
