//! Reduced forms in a multiple HNN extension of `U` with one stable letter per vertex.
//!
//! A reduced word is `g0 t1^e1 g1 ... tn^en gn` where `g_i` lies in the transversal of
//! `O\U` after a positive letter and of `phi(O)\U` after a negative one, and no
//! `t 1 t^-1` or `t^-1 1 t` with a repeated stable letter remains.

use crate::model::{BaseModel, UElem};
use crate::raag::Letter;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BrittonWord {
    pub head: UElem,
    pub tail: Vec<(Letter, UElem)>,
}

impl BrittonWord {
    pub fn of_u(u: UElem) -> BrittonWord {
        BrittonWord { head: u, tail: Vec::new() }
    }

    /// No pinch `t ω t^-1` (ω ∈ O) or `t^-1 v t` (v ∈ φ(O)) survives.
    pub fn is_pinch_free(&self, model: &BaseModel) -> bool {
        self.tail.windows(2).all(|w| {
            let ((x, g), (y, _)) = (&w[0], &w[1]);
            if x.gen != y.gen || x.inv == y.inv {
                return true;
            }
            if x.inv {
                !model.in_phi_o(g)
            } else {
                !model.in_o(g)
            }
        })
    }

    /// Transversal conditions on the entries after each stable letter.
    pub fn is_reduced(&self, model: &BaseModel) -> bool {
        self.is_pinch_free(model)
            && self.tail.iter().all(|(x, g)| {
                if x.inv {
                    model.decompose_phi(g).1 == *g
                } else {
                    model.decompose(g).1 == *g
                }
            })
    }
}

pub fn act_u(model: &BaseModel, u: &UElem, w: &BrittonWord) -> BrittonWord {
    BrittonWord { head: model.mul(u, &w.head), tail: w.tail.clone() }
}

pub fn act_letter(model: &BaseModel, x: Letter, w: &BrittonWord) -> BrittonWord {
    // t u = t ω ǔ = φ(ω) t ǔ, and t^-1 u = t^-1 v ǔ = φ^-1(v) t^-1 ǔ.
    let (part, check) = if x.inv { model.decompose_phi(&w.head) } else { model.decompose(&w.head) };
    let moved = model.phi_pow(&part, x.sign()).expect("decomposition lands in the domain");
    if model.is_identity(&check) {
        if let Some((y, g1)) = w.tail.first() {
            if *y == x.inverse() {
                return BrittonWord { head: model.mul(&moved, g1), tail: w.tail[1..].to_vec() };
            }
        }
    }
    let mut tail = Vec::with_capacity(w.tail.len() + 1);
    tail.push((x, check));
    tail.extend(w.tail.iter().cloned());
    BrittonWord { head: moved, tail }
}
