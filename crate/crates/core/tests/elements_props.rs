use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use topraag::{BaseModel, Element, Engine, EngineKind, Graph, Sym};

fn path(n: usize) -> Graph {
    Graph::from_edges(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>())
}

fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
}

fn engines() -> Vec<(&'static str, Engine)> {
    vec![
        ("shift2/edge", Engine::new(BaseModel::shift(2).unwrap(), path(2)).unwrap()),
        ("shift3/c4", Engine::new(BaseModel::shift(3).unwrap(), cycle(4)).unwrap()),
        ("s3a3/edge", Engine::new(BaseModel::s3_a3(), path(2)).unwrap()),
        ("s3a3/path3", Engine::new(BaseModel::s3_a3(), path(3)).unwrap()),
        ("trivial/k3", Engine::new(BaseModel::trivial(), Graph::complete(3)).unwrap()),
        ("shift2/two-points", Engine::new(BaseModel::shift(2).unwrap(), Graph::edgeless(2)).unwrap()),
        ("shift2/point-britton", Engine::britton(BaseModel::shift(2).unwrap(), Graph::edgeless(1)).unwrap()),
    ]
}

fn random_element(engine: &Engine, seed: u64, len: usize) -> (Vec<Sym>, Element) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = engine.random_word(&mut rng, len, &engine.sample_pool());
    let g = engine.from_word(&w);
    (w, g)
}

fn word_exponent(w: &[Sym]) -> i64 {
    w.iter().map(|x| if let Sym::Gen(l) = x { l.sign() } else { 0 }).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn engines_form_groups(seed in any::<u64>(), la in 0usize..8, lb in 0usize..8, lc in 0usize..8) {
        for (name, e) in engines() {
            let (wa, a) = random_element(&e, seed, la);
            let (_, b) = random_element(&e, seed ^ 0x9e37_79b9, lb);
            let (_, c) = random_element(&e, seed.wrapping_add(17), lc);
            prop_assert_eq!(e.mul(&e.mul(&a, &b), &c), e.mul(&a, &e.mul(&b, &c)), "{}", name);
            prop_assert!(e.is_identity(&e.mul(&a, &e.inv(&a))), "{}", name);
            prop_assert_eq!(e.mul(&e.identity(), &a), a.clone(), "{}", name);
            prop_assert_eq!(e.from_word(&e.word(&a)), a.clone(), "{}", name);
            prop_assert_eq!(e.parse_element(&e.word_string(&a)).unwrap(), a.clone(), "{}", name);
            prop_assert_eq!(e.exponent(&a), word_exponent(&wa), "{}", name);
            prop_assert_eq!(e.exponent(&e.mul(&a, &b)), e.exponent(&a) + e.exponent(&b), "{}", name);
            if let Some(x) = wa.first() {
                prop_assert_eq!(e.act(x, &b), e.mul(&e.from_word(std::slice::from_ref(x)), &b), "{}", name);
            }
        }
    }

    #[test]
    fn britton_and_semidirect_agree_on_one_letter(seed in any::<u64>(), la in 0usize..10, lb in 0usize..10) {
        let semi = Engine::new(BaseModel::shift(2).unwrap(), Graph::edgeless(1)).unwrap();
        let brit = Engine::britton(BaseModel::shift(2).unwrap(), Graph::edgeless(1)).unwrap();
        prop_assert_eq!(semi.kind(), EngineKind::Semidirect);
        let (wa, _) = random_element(&semi, seed, la);
        let (wb, _) = random_element(&semi, seed ^ 0xabcdef, lb);
        let same_semi = semi.from_word(&wa) == semi.from_word(&wb);
        let same_brit = brit.from_word(&wa) == brit.from_word(&wb);
        prop_assert_eq!(same_semi, same_brit);
        prop_assert_eq!(semi.exponent(&semi.from_word(&wa)), brit.exponent(&brit.from_word(&wa)));
    }

    #[test]
    fn defining_relations_hold(seed in any::<u64>()) {
        for (name, e) in engines() {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let report = e.verify_relations(&mut rng, 8);
            prop_assert!(report.is_ok(), "{}: {:?}", name, report.err());
        }
    }
}

#[test]
fn engine_selection() {
    let s2 = || BaseModel::shift(2).unwrap();
    assert_eq!(Engine::new(s2(), path(3)).unwrap().kind(), EngineKind::Semidirect);
    assert_eq!(Engine::new(BaseModel::s3_a3(), cycle(4)).unwrap().kind(), EngineKind::NormalSequences);
    assert_eq!(Engine::new(s2(), Graph::edgeless(3)).unwrap().kind(), EngineKind::Britton);
    let disconnected = Graph::from_edges(3, &[(0, 1)]);
    assert!(matches!(Engine::new(s2(), disconnected), Err(topraag::Error::DisconnectedGraph(_))));
}
