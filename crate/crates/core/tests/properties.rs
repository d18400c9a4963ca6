use ablp_core::bench::{gen_random, RandomParams};
use ablp_core::engine::{
    insert_abducible, produce_context, solve, Answer, CallKey, EngineOptions, Subsumption, TableStore,
};
use ablp_core::model::{Context, Literal, Term};
use ablp_core::oracle::minimal_antichain;
use ablp_core::parser::parse_program_str;
use ablp_core::transform::{transform_program, IcMode, TPred, TablingMode, TransformOptions};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn literal() -> impl Strategy<Value = Literal> {
    (0..3usize, 0..3i64, any::<bool>())
        .prop_map(|(p, a, neg)| Literal::new(neg, ["a", "b", "c"][p], vec![Term::Int(a)]))
}

fn has_complementary_pair(lits: &[Literal]) -> bool {
    lits.iter().any(|l| lits.contains(&l.complement()))
}

fn consistent_context() -> impl Strategy<Value = Context> {
    prop::collection::vec(literal(), 0..6).prop_map(|mut lits| {
        let mut keep: Vec<Literal> = Vec::new();
        for l in lits.drain(..) {
            if !keep.contains(&l.complement()) {
                keep.push(l);
            }
        }
        Context::new(keep).unwrap()
    })
}

proptest! {
    #[test]
    fn context_is_canonical_and_consistent(lits in prop::collection::vec(literal(), 0..8)) {
        match Context::new(lits.clone()) {
            Ok(c) => {
                prop_assert!(!has_complementary_pair(&lits));
                let s = c.literals();
                prop_assert!(s.windows(2).all(|w| w[0] < w[1]));
                prop_assert!(lits.iter().all(|l| c.contains(l)));
                prop_assert!(s.iter().all(|l| lits.contains(l)));
            }
            Err(_) => prop_assert!(has_complementary_pair(&lits)),
        }
    }

    #[test]
    fn produce_context_laws(i in consistent_context(), e in consistent_context()) {
        prop_assert_eq!(produce_context(&i, &i), Some(i.clone()));
        prop_assert_eq!(produce_context(&i, &Context::empty()), Some(i.clone()));
        match produce_context(&i, &e) {
            Some(o) => {
                prop_assert!(i.is_subset(&o) && e.is_subset(&o));
                prop_assert_eq!(produce_context(&o, &e), Some(o.clone()));
                prop_assert_eq!(produce_context(&e, &i), Some(o));
            }
            None => prop_assert!(i.iter().any(|l| e.contains(&l.complement()))),
        }
    }

    #[test]
    fn insert_abducible_laws(i in consistent_context(), a in literal()) {
        let once = insert_abducible(&a, &i).unwrap();
        if i.contains(&a.complement()) {
            prop_assert_eq!(once, None);
        } else {
            let o = once.unwrap();
            prop_assert!(o.contains(&a) && i.is_subset(&o));
            prop_assert_eq!(insert_abducible(&a, &o).unwrap(), Some(o.clone()));
            prop_assert_eq!(insert_abducible(&a.complement(), &o).unwrap(), None);
        }
    }

    #[test]
    fn random_frameworks_round_trip(seed in any::<u64>()) {
        let fw = gen_random(seed, &RandomParams::default()).framework;
        let back = parse_program_str(&fw.to_string()).unwrap();
        prop_assert_eq!(back, fw);
    }
}

#[test]
fn minimal_inserts_keep_an_antichain() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let key = CallKey {
        pred: TPred::Tabled("p".into()),
        args: vec![],
    };
    let mut store = TableStore::new();
    let mut inserted = Vec::new();
    for _ in 0..10_000 {
        let lits: Vec<Literal> = (0..6i64)
            .filter_map(|k| match rng.gen_range(0..4) {
                0 => Some(Literal::pos("a", vec![Term::Int(k)])),
                1 => Some(Literal::neg("a", vec![Term::Int(k)])),
                _ => None,
            })
            .collect();
        let ctx = Context::new(lits).unwrap();
        inserted.push(ctx.clone());
        store.table_insert(&key, Answer { args: vec![], context: ctx }, Subsumption::Minimal);
    }
    let mut stored: Vec<Context> = store.get(&key).unwrap().answers.iter().map(|a| a.context.clone()).collect();
    for (i, a) in stored.iter().enumerate() {
        for (j, b) in stored.iter().enumerate() {
            assert!(i == j || !a.is_subset(b), "{a} ⊆ {b}");
        }
    }
    stored.sort();
    let mut expected = minimal_antichain(inserted);
    expected.sort();
    assert_eq!(stored, expected);
}

#[test]
fn solving_is_deterministic() {
    for seed in 0..50 {
        let inst = gen_random(seed, &RandomParams::default());
        for mode in [IcMode::Subcheck, IcMode::Dual] {
            let tp = transform_program(&inst.framework, TransformOptions::new(mode, TablingMode::Normal)).unwrap();
            let opts = EngineOptions::for_program(&tp, Subsumption::All);
            for q in &inst.queries {
                let a = solve(&tp, q, &Context::empty(), opts);
                let b = solve(&tp, q, &Context::empty(), opts);
                match (a, b) {
                    (Ok(a), Ok(b)) => {
                        assert_eq!(a.solutions, b.solutions);
                        assert_eq!(a.metrics.inferences, b.metrics.inferences);
                        assert_eq!(a.metrics.table_bytes, b.metrics.table_bytes);
                    }
                    (a, b) => assert_eq!(a.err(), b.err()),
                }
            }
        }
    }
}
