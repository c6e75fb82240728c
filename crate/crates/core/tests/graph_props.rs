use proptest::prelude::*;
use topraag::graph::Chordality;
use topraag::Graph;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |bits| {
            let edges: Vec<(usize, usize)> = pairs.iter().zip(&bits).filter(|(_, &b)| b).map(|(&p, _)| p).collect();
            Graph::from_edges(n, &edges)
        })
    })
}

/// A vertex subset of size at least four inducing a cycle.
fn brute_induced_cycle(g: &Graph) -> bool {
    let n = g.len();
    (0u32..1 << n).any(|mask| {
        let vs: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        if vs.len() < 4 {
            return false;
        }
        let all_degree_two =
            vs.iter().all(|&v| vs.iter().filter(|&&w| w != v && g.adjacent(v, w)).count() == 2);
        all_degree_two && g.induced(&vs).is_connected()
    })
}

fn brute_clique_number(g: &Graph) -> usize {
    let n = g.len();
    (0u32..1 << n)
        .map(|mask| (0..n).filter(|&v| mask >> v & 1 == 1).collect::<Vec<_>>())
        .filter(|vs| g.is_clique(vs))
        .map(|vs| vs.len())
        .max()
        .unwrap_or(0)
}

proptest! {
    #[test]
    fn chordality_agrees_with_brute_force(g in arb_graph(7)) {
        prop_assert_eq!(g.is_chordal(), !brute_induced_cycle(&g));
        match g.chordality() {
            Chordality::Chordal { elimination_order } => {
                prop_assert!(g.is_perfect_elimination_order(&elimination_order));
            }
            Chordality::NotChordal { induced_cycle } => {
                prop_assert!(induced_cycle.len() >= 4);
                prop_assert!(g.is_induced_cycle(&induced_cycle));
            }
        }
    }

    #[test]
    fn clique_number_agrees_with_brute_force(g in arb_graph(7)) {
        prop_assert_eq!(g.clique_number(), brute_clique_number(&g));
        let fam = g.cliques();
        for c in fam.nonempty() {
            prop_assert!(g.is_clique(c));
        }
        prop_assert_eq!(fam.max_size(), brute_clique_number(&g));
    }

    #[test]
    fn components_partition_the_vertices(g in arb_graph(7)) {
        let comps = g.component_sets();
        let mut all: Vec<usize> = comps.iter().flatten().copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..g.len()).collect::<Vec<_>>());
        prop_assert_eq!(g.is_connected(), comps.len() == 1);
        for c in &comps {
            prop_assert!(g.induced(c).is_connected());
        }
    }

    #[test]
    fn json_round_trip(g in arb_graph(6)) {
        let text = serde_json::to_string(&g.to_raw()).unwrap();
        prop_assert_eq!(Graph::from_json(&text).unwrap(), g);
    }
}

#[test]
fn cycles_are_the_smallest_non_chordal_graphs() {
    let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
    assert!(!c4.is_chordal());
    assert!(c4.clone().with_edge(0, 2).is_chordal());
    let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
    assert_eq!(c5.find_induced_cycle().map(|c| c.len()), Some(5));
}

#[test]
fn malformed_graphs_are_rejected() {
    assert!(Graph::new(&["a", "a"], &[]).is_err());
    assert!(Graph::new(&["a"], &[("a", "a")]).is_err());
    assert!(Graph::new(&["a"], &[("a", "b")]).is_err());
}
