use num_rational::Ratio;
use proptest::prelude::*;
use topraag::qcalc::{euler_characteristic, hnn_euler, is_q_acyclic, kunneth, sb_homology, Tail};
use topraag::{DimValue, GradedDim};

fn arb_dim() -> impl Strategy<Value = DimValue> {
    prop_oneof![
        6 => (0u64..5).prop_map(DimValue::Finite),
        1 => Just(DimValue::Infinite),
        1 => Just(DimValue::Unknown),
    ]
}

fn arb_graded() -> impl Strategy<Value = GradedDim> {
    (proptest::collection::vec(arb_dim(), 0..5), prop_oneof![4 => Just(Tail::Zero), 1 => Just(Tail::Unknown)])
        .prop_map(|(v, tail)| GradedDim::with_tail(&v, tail))
}

fn arb_finite() -> impl Strategy<Value = Vec<u64>> {
    proptest::collection::vec(0u64..6, 0..5)
}

proptest! {
    #[test]
    fn kunneth_is_a_commutative_monoid(a in arb_graded(), b in arb_graded(), c in arb_graded()) {
        prop_assert_eq!(kunneth(&a, &b), kunneth(&b, &a));
        prop_assert_eq!(kunneth(&kunneth(&a, &b), &c), kunneth(&a, &kunneth(&b, &c)));
        prop_assert_eq!(kunneth(&a, &GradedDim::unit()), a.clone());
    }

    #[test]
    fn kunneth_of_finite_tables_is_polynomial_product(a in arb_finite(), b in arb_finite()) {
        let mut prod = vec![0u64; a.len() + b.len()];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        let c = kunneth(&GradedDim::from_counts(&a), &GradedDim::from_counts(&b));
        for (d, &p) in prod.iter().enumerate() {
            prop_assert_eq!(c.get(d as u32), DimValue::Finite(p));
        }
        // The Euler characteristic is multiplicative.
        let ea = euler_characteristic(&GradedDim::from_counts(&a)).unwrap();
        let eb = euler_characteristic(&GradedDim::from_counts(&b)).unwrap();
        prop_assert_eq!(euler_characteristic(&c), Some(ea * eb));
    }

    #[test]
    fn products_of_acyclic_tables_are_acyclic(a in arb_graded(), b in arb_graded()) {
        if is_q_acyclic(&a) && is_q_acyclic(&b) {
            prop_assert!(is_q_acyclic(&kunneth(&a, &b)));
        }
    }

    #[test]
    fn hnn_euler_matches_alternating_sum(
        u in proptest::collection::vec(0u64..8, 1..5),
        o in proptest::collection::vec(0u64..8, 1..5),
        x in 0u32..5,
    ) {
        // χ of an HNN splitting: chain ranks of U in degree d plus |X| copies of O in degree d + 1.
        let len = u.len().max(o.len() + 1);
        let mut ranks = vec![0i64; len];
        for (d, &v) in u.iter().enumerate() {
            ranks[d] += v as i64;
        }
        for (d, &v) in o.iter().enumerate() {
            ranks[d + 1] += x as i64 * v as i64;
        }
        let direct: i64 = ranks.iter().enumerate().map(|(d, &r)| if d % 2 == 0 { r } else { -r }).sum();
        let chi_u = euler_characteristic(&GradedDim::from_counts(&u)).unwrap();
        let chi_o = euler_characteristic(&GradedDim::from_counts(&o)).unwrap();
        prop_assert_eq!(hnn_euler(Ratio::from_integer(chi_u), Ratio::from_integer(chi_o), x), Ratio::from_integer(direct));
    }

    #[test]
    fn json_round_trip(a in arb_graded()) {
        prop_assert_eq!(GradedDim::from_json(&a.to_json()).unwrap(), a);
    }
}

#[test]
fn sb_tables() {
    for n in 0..6 {
        let t = sb_homology(n);
        assert_eq!(t.get(0), DimValue::Finite(1));
        assert_eq!(t.get(n + 1), DimValue::Infinite);
        assert_eq!(t.get(n + 2), DimValue::Finite(0));
        assert!((1..=n).all(|d| t.get(d) == DimValue::Unknown));
        assert!(!is_q_acyclic(&t));
    }
}

#[test]
fn rational_euler_characteristics() {
    let half = Ratio::new(1, 2);
    assert_eq!(hnn_euler(half, Ratio::new(1, 6), 3), Ratio::from_integer(0));
    assert_eq!(hnn_euler(Ratio::from_integer(1), Ratio::from_integer(1), 1), Ratio::from_integer(0));
}
