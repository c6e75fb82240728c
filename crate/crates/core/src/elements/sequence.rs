//! Normal sequences `(u0, a1, u1, ..., an, un)` for models with `phi(O) = O`.

use crate::model::{BaseModel, UElem};
use crate::raag::{Letter, NormalWord, Raag};

/// `u0` followed by pairs `(a_i, u_i)` with `a_i` a non-trivial canonical word,
/// `u_i` in `R \ {1}` for `i < n` and `u_n` in `R`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalSequence {
    pub head: UElem,
    pub tail: Vec<(NormalWord, UElem)>,
}

impl NormalSequence {
    pub fn of_u(u: UElem) -> NormalSequence {
        NormalSequence { head: u, tail: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.tail.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tail.is_empty()
    }

    /// Check the defining conditions against a model.
    pub fn is_valid(&self, model: &BaseModel) -> bool {
        let r = model.right_transversal();
        let n = self.tail.len();
        self.tail.iter().enumerate().all(|(i, (a, u))| {
            !a.is_empty() && r.contains(u) && (i + 1 == n || !model.is_identity(u))
        })
    }
}

/// Left multiplication by `u` in `U`.
pub fn act_u(model: &BaseModel, u: &UElem, s: &NormalSequence) -> NormalSequence {
    NormalSequence { head: model.mul(u, &s.head), tail: s.tail.clone() }
}

/// Left multiplication by a generator letter, following the three cases of the action.
pub fn act_letter(model: &BaseModel, raag: &Raag, x: Letter, s: &NormalSequence) -> NormalSequence {
    let e = x.sign();
    let (omega, check) = model.decompose(&s.head);
    let twisted = model.phi_pow(&omega, e).expect("phi(O) = O keeps omega in the domain");
    if s.tail.is_empty() || !model.is_identity(&check) {
        let mut tail = Vec::with_capacity(s.tail.len() + 1);
        tail.push((raag.letter(x), check));
        tail.extend(s.tail.iter().cloned());
        return NormalSequence { head: twisted, tail };
    }
    let (a1, u1) = &s.tail[0];
    if a1.is_letter(x.inverse()) {
        NormalSequence { head: model.mul(&twisted, u1), tail: s.tail[1..].to_vec() }
    } else {
        let mut tail = s.tail.clone();
        tail[0].0 = raag.prepend(x, a1).expect("word within cap");
        NormalSequence { head: twisted, tail }
    }
}
