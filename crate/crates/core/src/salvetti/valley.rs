//! Valleys of the fundamental apartment and their finite truncations.
//!
//! The fundamental apartment is the standard cube complex of `A_Γ`: cells `aQ_T` with
//! corners `a t_X`. The valley at latitude `t` collects the cells with `e(a) + |T| <= t`.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::homology::{Cell, CellComplex};
use crate::raag::{ArtinWord, Letter, NormalWord, Raag};

/// Window on the apartment: exponent range of all corners and word length of all corners.
#[derive(Clone, Copy, Debug)]
pub struct ValleyWindow {
    pub e_min: i64,
    pub e_max: i64,
    pub radius: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ValleyCell {
    pub a: NormalWord,
    pub cube_type: Vec<usize>,
}

impl ValleyCell {
    pub fn dim(&self) -> usize {
        self.cube_type.len()
    }
}

fn corners(raag: &Raag, a: &NormalWord, t: &[usize]) -> Vec<NormalWord> {
    (0..1usize << t.len())
        .map(|mask| {
            let mut w = a.letters().to_vec();
            w.extend(t.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &g)| Letter::pos(g)));
            raag.normal_form(&ArtinWord(w)).expect("short word")
        })
        .collect()
}

/// Cells of the valley at latitude `t` whose corners all lie in the window.
pub fn valley_cells(graph: &Graph, t: i64, window: &ValleyWindow) -> Result<Vec<ValleyCell>> {
    if !graph.is_connected() {
        return Err(Error::DisconnectedGraph(graph.describe()));
    }
    if window.e_min > window.e_max {
        return Err(Error::EmptyWindow);
    }
    let raag = Raag::new(graph.clone());
    let cliques = graph.cliques();
    let mut out = Vec::new();
    for a in raag.ball(window.radius) {
        for tt in &cliques.cliques {
            if a.exponent() + tt.len() as i64 > t {
                continue;
            }
            let inside = corners(&raag, &a, tt).iter().all(|c| {
                c.len() <= window.radius && (window.e_min..=window.e_max).contains(&c.exponent())
            });
            if inside {
                out.push(ValleyCell { a: a.clone(), cube_type: tt.clone() });
            }
        }
    }
    out.sort();
    Ok(out)
}

/// The part of the valley at latitude `t` within path distance `radius` of a base vertex,
/// measured inside the valley's own 1-skeleton. The base vertex is `1` when `t >= 0` and
/// `s^t` for the first vertex `s` otherwise. Returns the full subcomplex of the valley on
/// the vertices reached.
pub fn valley_truncation(graph: &Graph, t: i64, radius: usize) -> Result<Vec<ValleyCell>> {
    if !graph.is_connected() || graph.is_empty() {
        return Err(Error::DisconnectedGraph(graph.describe()));
    }
    let raag = Raag::new(graph.clone());
    let base_letters: Vec<Letter> = (0..(-t).max(0)).map(|_| Letter::neg(0)).collect();
    let base = raag.normal_form(&ArtinWord(base_letters))?;
    let mut dist: HashMap<NormalWord, usize> = HashMap::from([(base.clone(), 0)]);
    let mut queue = VecDeque::from([base]);
    while let Some(a) = queue.pop_front() {
        let d = dist[&a];
        if d == radius {
            continue;
        }
        for g in 0..graph.len() {
            for l in [Letter::pos(g), Letter::neg(g)] {
                let mut w = a.letters().to_vec();
                w.push(l);
                let b = raag.normal_form(&ArtinWord(w))?;
                if b.exponent() <= t && !dist.contains_key(&b) {
                    dist.insert(b.clone(), d + 1);
                    queue.push_back(b);
                }
            }
        }
    }
    let cliques = graph.cliques();
    let mut out = Vec::new();
    for a in dist.keys() {
        for tt in &cliques.cliques {
            if a.exponent() + tt.len() as i64 <= t && corners(&raag, a, tt).iter().all(|c| dist.contains_key(c)) {
                out.push(ValleyCell { a: a.clone(), cube_type: tt.clone() });
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Cell complex of a list of apartment cells.
pub fn valley_complex(graph: &Graph, cells: &[ValleyCell]) -> CellComplex {
    let raag = Raag::new(graph.clone());
    let mut ids: HashMap<NormalWord, usize> = HashMap::new();
    let mut out = Vec::with_capacity(cells.len());
    for c in cells {
        let cs = corners(&raag, &c.a, &c.cube_type);
        let corner_ids = cs
            .into_iter()
            .map(|w| {
                let n = ids.len();
                *ids.entry(w).or_insert(n)
            })
            .collect();
        out.push(Cell { corners: corner_ids });
    }
    CellComplex::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge() -> Graph {
        Graph::new(&["s", "t"], &[("s", "t")]).unwrap()
    }

    #[test]
    fn window_examples() {
        let g = edge();
        let raag = Raag::new(g.clone());
        let w = ValleyWindow { e_min: -2, e_max: 0, radius: 4 };
        let cells = valley_cells(&g, 0, &w).unwrap();
        let has_vertex = |s: &str| {
            let a = raag.normal_form(&raag.parse(s).unwrap()).unwrap();
            cells.iter().any(|c| c.a == a && c.dim() == 0)
        };
        assert!(has_vertex(""));
        assert!(has_vertex("s^-1"));
        assert!(!has_vertex("s"));
        let a = raag.normal_form(&raag.parse("s^-1 t^-1").unwrap()).unwrap();
        assert!(cells.iter().any(|c| c.a == a && c.cube_type == vec![0, 1]));
        assert!(valley_cells(&g, -10, &w).unwrap().is_empty());
        assert!(matches!(valley_cells(&g, 0, &ValleyWindow { e_min: 1, e_max: 0, radius: 2 }), Err(Error::EmptyWindow)));
    }

    #[test]
    fn truncation_stays_below_latitude() {
        let g = edge();
        for t in [-1, 0, 2] {
            let cells = valley_truncation(&g, t, 3).unwrap();
            assert!(cells.iter().all(|c| c.a.exponent() + c.dim() as i64 <= t));
            assert!(!cells.is_empty());
        }
    }
}
