//! Pairs `(n, a)` in `Z[1/m] ⋊ A_Γ` for the shift model over a connected graph.
//!
//! Every Artin generator conjugates the normal subgroup by one shift:
//! `a n a^-1 = m^{e(a)} n`. The product is `(n1, a1)(n2, a2) = (n1 + m^{e(a1)} n2, a1 a2)`.

use crate::model::NPair;
use crate::raag::{Letter, NormalWord, Raag};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SemiElement {
    pub n: NPair,
    pub a: NormalWord,
}

impl SemiElement {
    pub fn identity() -> SemiElement {
        SemiElement { n: NPair::zero(), a: NormalWord::identity() }
    }
}

pub fn multiply(m: i64, raag: &Raag, x: &SemiElement, y: &SemiElement) -> SemiElement {
    let n = x.n.add(&y.n.shift(x.a.exponent(), m), m);
    SemiElement { n, a: raag.multiply(&x.a, &y.a).expect("word within cap") }
}

pub fn invert(m: i64, raag: &Raag, x: &SemiElement) -> SemiElement {
    SemiElement { n: x.n.shift(-x.a.exponent(), m).neg(), a: raag.invert(&x.a).expect("word within cap") }
}

/// Left multiplication by a generator: `t (n, a) = (m^{±1} n, t a)`.
pub fn act_letter(m: i64, raag: &Raag, x: Letter, g: &SemiElement) -> SemiElement {
    SemiElement { n: g.n.shift(x.sign(), m), a: raag.prepend(x, &g.a).expect("word within cap") }
}
