use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use topraag::graph::SimplicialComplex;
use topraag::homology::{
    chain_complex, dense_mul, homological_connectivity, reduced_betti_mod_p, reduced_betti_q, reduced_homology,
    simplicial_chain_complex, smith_normal_form, Cell, Connectivity, SparseMatrix,
};
use topraag::{build_ball, BallCaps, BaseModel, CellComplex, Engine, Graph};

fn big(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn arb_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| proptest::collection::vec(proptest::collection::vec(-9i64..=9, c), r))
}

fn det(m: &[Vec<BigInt>]) -> BigInt {
    // Bareiss elimination; exact for square integer matrices.
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

proptest! {
    #[test]
    fn smith_form_is_a_valid_decomposition(m in arb_or_zero()) {
        let mb = big(&m);
        let s = smith_normal_form(&mb);
        prop_assert_eq!(dense_mul(&dense_mul(&s.p, &mb), &s.q), s.d.clone());
        for (i, row) in s.d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i != j {
                    prop_assert!(x.is_zero());
                }
            }
        }
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                prop_assert!(!w[0].is_zero() && w[1].is_multiple_of(&w[0]));
            }
        }
        prop_assert!(diag.iter().all(|x| !x.is_negative()));
        prop_assert_eq!(det(&s.p).abs(), BigInt::one());
        prop_assert_eq!(det(&s.q).abs(), BigInt::one());

        let sparse = SparseMatrix::from_dense(&m);
        let nonzero: Vec<BigInt> = diag.into_iter().filter(|x| !x.is_zero()).collect();
        prop_assert_eq!(sparse.invariant_factors(), nonzero.clone());
        prop_assert_eq!(sparse.rank_q(), nonzero.len());
        let odd = nonzero.iter().filter(|x| x.is_odd()).count();
        prop_assert_eq!(sparse.rank_mod_p(2), odd);
    }

    #[test]
    fn two_by_two_factors_match_gcd_and_determinant(a in -30i64..=30, b in -30i64..=30, c in -30i64..=30, d in -30i64..=30) {
        let f = SparseMatrix::from_dense(&[vec![a, b], vec![c, d]]).invariant_factors();
        let g = a.gcd(&b).gcd(&c).gcd(&d);
        let det = (a * d - b * c).abs();
        let expected: Vec<BigInt> = match (g, det) {
            (0, _) => vec![],
            (g, 0) => vec![BigInt::from(g)],
            (g, det) => vec![BigInt::from(g), BigInt::from(det / g)],
        };
        prop_assert_eq!(f, expected);
    }

    #[test]
    fn random_subcomplexes_are_chain_complexes(seed in proptest::collection::vec(any::<bool>(), 64), which in 0usize..3) {
        let (model, graph) = [
            (BaseModel::trivial(), Graph::complete(3)),
            (BaseModel::shift(2).unwrap(), Graph::from_edges(2, &[(0, 1)])),
            (BaseModel::s3_a3(), Graph::from_edges(3, &[(0, 1), (1, 2)])),
        ][which].clone();
        let ball = build_ball(&Engine::new(model, graph).unwrap(), 2, BallCaps::default()).unwrap();
        // Pick top cubes, then close downwards.
        let chosen: Vec<BTreeSet<usize>> = ball
            .cubes
            .iter()
            .enumerate()
            .filter(|(i, _)| seed[i % seed.len()] && i % 3 == 0)
            .map(|(_, c)| c.corners.iter().copied().collect())
            .collect();
        let cells: Vec<Cell> = ball
            .cubes
            .iter()
            .filter(|c| chosen.iter().any(|s| c.corners.iter().all(|v| s.contains(v))))
            .map(|c| Cell { corners: c.corners.clone() })
            .collect();
        let cx = CellComplex::new(cells);
        let cc = chain_complex(&cx).unwrap();
        prop_assert!(cc.check_d_squared());
        let h = reduced_homology(&cc);
        if !cx.is_empty() {
            prop_assert_eq!(reduced_betti_q(&cc), h.betti_numbers());
            let alt: i64 = h.betti_numbers().iter().enumerate().map(|(d, &b)| if d % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
            prop_assert_eq!(alt, cx.euler_characteristic() - 1);
            let torsion_free = h.degrees.iter().all(|d| d.torsion.is_empty());
            if torsion_free {
                prop_assert_eq!(reduced_betti_mod_p(&cc, 2), h.betti_numbers());
            }
        }
    }
}

fn arb_or_zero() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop_oneof![4 => arb_matrix(), 1 => (1usize..4, 1usize..4).prop_map(|(r, c)| vec![vec![0; c]; r])]
}

#[test]
fn small_smith_examples() {
    let s = smith_normal_form(&big(&[vec![2, 0], vec![0, 3]]));
    assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    let id = big(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    assert_eq!(smith_normal_form(&id).d, id);
    assert!(SparseMatrix::from_dense(&[vec![0, 0], vec![0, 0]]).invariant_factors().is_empty());
}

fn projective_plane() -> SimplicialComplex {
    let triangles = [
        [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1],
        [1, 2, 4], [2, 3, 5], [3, 4, 1], [4, 5, 2], [5, 1, 3],
    ];
    let mut simplices = BTreeSet::new();
    for t in triangles {
        for mask in 1u32..8 {
            let mut s: Vec<usize> = (0..3).filter(|i| mask >> i & 1 == 1).map(|i| t[i]).collect();
            s.sort_unstable();
            simplices.insert(s);
        }
    }
    SimplicialComplex { simplices }
}

#[test]
fn projective_plane_has_two_torsion() {
    let k = projective_plane();
    assert_eq!(k.simplices.len(), 6 + 15 + 10);
    let cc = simplicial_chain_complex(&k).unwrap();
    assert!(cc.check_d_squared());
    let h = reduced_homology(&cc);
    assert_eq!(h.betti_numbers(), vec![0, 0, 0]);
    assert_eq!(h.degrees[1].torsion, vec![BigInt::from(2)]);
    assert_eq!(reduced_betti_q(&cc), vec![0, 0, 0]);
    assert_eq!(reduced_betti_mod_p(&cc, 2), vec![0, 1, 1]);
    assert_eq!(reduced_betti_mod_p(&cc, 3), vec![0, 0, 0]);
    assert_eq!(homological_connectivity(&h), Connectivity::Exact(0));
}

#[test]
fn connectivity_conventions() {
    let two_points = CellComplex::new(vec![Cell { corners: vec![0] }, Cell { corners: vec![1] }]);
    let h = reduced_homology(&chain_complex(&two_points).unwrap());
    assert_eq!(homological_connectivity(&h), Connectivity::Exact(-1));
    let point = CellComplex::new(vec![Cell { corners: vec![0] }]);
    let h = reduced_homology(&chain_complex(&point).unwrap());
    assert_eq!(homological_connectivity(&h), Connectivity::AtLeast(0));
    let h = reduced_homology(&chain_complex(&CellComplex::new(vec![])).unwrap());
    assert_eq!(homological_connectivity(&h), Connectivity::Exact(-2));
}

#[test]
fn cube_boundary_has_six_faces() {
    let cube: Vec<Cell> = (0..8usize)
        .map(|v| vec![v])
        .chain((0..8usize).flat_map(|v| (0..3).filter(move |i| v >> i & 1 == 0).map(move |i| vec![v, v | 1 << i])))
        .chain((0..8usize).flat_map(|v| {
            [(0, 1), (0, 2), (1, 2)]
                .into_iter()
                .filter(move |&(i, j)| v >> i & 1 == 0 && v >> j & 1 == 0)
                .map(move |(i, j)| vec![v, v | 1 << i, v | 1 << j, v | 1 << i | 1 << j])
        }))
        .chain(std::iter::once((0..8).collect()))
        .map(|corners| Cell { corners })
        .collect();
    let cc = chain_complex(&CellComplex::new(cube)).unwrap();
    assert_eq!(cc.boundaries[3].nnz(), 6);
    assert!(cc.check_d_squared());
    assert!(reduced_homology(&cc).degrees.iter().all(|d| d.is_zero()));
}
