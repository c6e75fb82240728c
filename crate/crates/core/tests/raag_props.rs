use std::collections::{BTreeSet, VecDeque};

use proptest::prelude::*;
use topraag::{ArtinWord, Graph, Letter, Raag};

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |bits| {
            let edges: Vec<(usize, usize)> = pairs.iter().zip(&bits).filter(|(_, &b)| b).map(|(&p, _)| p).collect();
            Graph::from_edges(n, &edges)
        })
    })
}

fn arb_word(n: usize, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    proptest::collection::vec((0..n, any::<bool>()), 0..=max_len)
        .prop_map(|v| v.into_iter().map(|(gen, inv)| Letter { gen, inv }).collect())
}

fn graph_and_words(count: usize) -> impl Strategy<Value = (Graph, Vec<Vec<Letter>>)> {
    arb_graph(4).prop_flat_map(move |g| {
        let n = g.len();
        (Just(g), proptest::collection::vec(arb_word(n, 6), count))
    })
}

/// Every word reachable by swapping adjacent commuting letters and deleting adjacent `x x^-1`.
fn closure(g: &Graph, w: &[Letter]) -> BTreeSet<Vec<Letter>> {
    let mut seen = BTreeSet::from([w.to_vec()]);
    let mut queue = VecDeque::from([w.to_vec()]);
    while let Some(u) = queue.pop_front() {
        for i in 0..u.len().saturating_sub(1) {
            let (a, b) = (u[i], u[i + 1]);
            let mut next = Vec::new();
            if a.gen == b.gen && a.inv != b.inv {
                let mut v = u.clone();
                v.drain(i..i + 2);
                next.push(v);
            } else if a.gen != b.gen && g.adjacent(a.gen, b.gen) {
                let mut v = u.clone();
                v.swap(i, i + 1);
                next.push(v);
            }
            for v in next {
                if seen.insert(v.clone()) {
                    queue.push_back(v);
                }
            }
        }
    }
    seen
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_form_is_the_least_geodesic((g, ws) in graph_and_words(1)) {
        let raag = Raag::new(g.clone());
        let w = &ws[0];
        let nf = raag.normal_form(&ArtinWord(w.clone())).unwrap();
        let class = closure(&g, w);
        let min_len = class.iter().map(Vec::len).min().unwrap();
        let least = class.iter().filter(|v| v.len() == min_len).min().unwrap();
        prop_assert_eq!(nf.letters(), least.as_slice());
        prop_assert_eq!(nf.exponent(), ArtinWord(w.clone()).exponent());
    }

    #[test]
    fn equal_canonical_forms_iff_shuffle_equivalent((g, ws) in graph_and_words(2)) {
        let raag = Raag::new(g.clone());
        let a = raag.normal_form(&ArtinWord(ws[0].clone())).unwrap();
        let b = raag.normal_form(&ArtinWord(ws[1].clone())).unwrap();
        let ca = closure(&g, &ws[0]);
        let cb = closure(&g, &ws[1]);
        prop_assert_eq!(a == b, !ca.is_disjoint(&cb));
    }

    #[test]
    fn group_axioms((g, ws) in graph_and_words(3)) {
        let raag = Raag::new(g);
        let [a, b, c] = [0, 1, 2].map(|i| raag.normal_form(&ArtinWord(ws[i].clone())).unwrap());
        let ab_c = raag.multiply(&raag.multiply(&a, &b).unwrap(), &c).unwrap();
        let a_bc = raag.multiply(&a, &raag.multiply(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let inv = raag.invert(&a).unwrap();
        prop_assert!(raag.multiply(&a, &inv).unwrap().is_empty());
        prop_assert_eq!(raag.normal_form(&a.as_word()).unwrap(), a.clone());
        let parsed = raag.parse(&raag.format(&a)).unwrap();
        prop_assert_eq!(raag.normal_form(&parsed).unwrap(), a);
    }
}

#[test]
fn ball_sizes_of_small_groups() {
    // Free group on two letters: 1 + 4 + 12 words of length at most 2.
    assert_eq!(Raag::new(Graph::edgeless(2)).ball(2).len(), 17);
    // Z^2: lattice points with |x| + |y| <= 2.
    assert_eq!(Raag::new(Graph::complete(2)).ball(2).len(), 13);
}
