use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use roach_core::census::{random_noncompact_ordinal, random_ordinal, random_two_roach};
use roach_core::construct::{roach_to_willow, unravel_to_quasi_tree};
use roach_core::formula::{parse, var, Formula};
use roach_core::frame::{Direction, Frame, WorldSet};
use roach_core::iso::{are_isomorphic, canonical_code};
use roach_core::morphism::PMorphism;
use roach_core::ordinal::{tear_off, Ordinal};
use roach_core::roach::{is_2_roach, is_willow_tree};
use roach_core::semantics::{Model, Valuation};

fn formula(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        4 => prop::sample::select(vec!["p", "q", "r", "p1", "long_name"]).prop_map(var),
        1 => Just(Formula::Top),
        1 => Just(Formula::Bot),
    ];
    leaf.prop_recursive(depth, 64, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::boxed),
            inner.clone().prop_map(Formula::diamond),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
            (inner.clone(), inner).prop_map(|(a, b)| a.implies(b)),
        ]
    })
}

fn frame(max: usize) -> impl Strategy<Value = Frame> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..(2 * n)).prop_map(move |pairs| Frame::from_pairs(n, &pairs).unwrap())
    })
}

fn frame_and_set(max: usize) -> impl Strategy<Value = (Frame, WorldSet)> {
    frame(max).prop_flat_map(|f| {
        let n = f.size();
        (Just(f), prop::collection::vec(0..n, 0..n).prop_map(|ws| ws.into_iter().collect()))
    })
}

fn frame_and_perm(max: usize) -> impl Strategy<Value = (Frame, Vec<usize>)> {
    frame(max).prop_flat_map(|f| {
        let perm: Vec<usize> = f.worlds().collect();
        (Just(f), Just(perm).prop_shuffle())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn formulas_round_trip(phi in formula(6)) {
        prop_assert!(phi.modal_depth() <= 6);
        let text = phi.to_string();
        prop_assert_eq!(parse(&text).unwrap(), phi);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn closure_is_idempotent(f in frame(8)) {
        let again = Frame::from_closed_pairs(f.size(), &f.pairs()).unwrap();
        prop_assert_eq!(&again, &f);
        prop_assert_eq!(Frame::from_pairs(f.size(), &f.pairs()).unwrap(), f);
    }

    #[test]
    fn order_queries_are_closures((f, a) in frame_and_set(8)) {
        let up = f.order_query(a, Direction::Up).unwrap();
        let down = f.order_query(a, Direction::Down).unwrap();
        prop_assert!(a.is_subset(up) && a.is_subset(down));
        prop_assert_eq!(f.order_query(up, Direction::Up).unwrap(), up);
        prop_assert_eq!(f.order_query(down, Direction::Down).unwrap(), down);
        prop_assert!(f.is_upset(up) && f.is_downset(down));
    }

    #[test]
    fn depth_is_monotone(f in frame(8)) {
        for u in f.worlds() {
            for w in f.up(u).iter() {
                if f.le(w, u) {
                    prop_assert_eq!(f.depth(u), f.depth(w));
                } else {
                    prop_assert!(f.depth(u) > f.depth(w));
                }
            }
        }
    }

    #[test]
    fn skeleton_projection_is_a_p_morphism(f in frame(8)) {
        let sk = f.skeleton();
        prop_assert!(sk.frame.is_partial_order());
        let pi = PMorphism::new(f.clone(), sk.frame.clone(), sk.pi.clone());
        prop_assert_eq!(pi.check(true), Ok(()));
    }

    #[test]
    fn s412_means_one_maximal_point(f in frame(7)) {
        let flags = f.classify();
        if flags.s412 {
            prop_assert!(flags.s41);
            prop_assert_eq!(f.maximal_points().len(), 1);
        }
        if flags.tree {
            prop_assert!(flags.quasi_tree && flags.partial_order);
        }
    }

    #[test]
    fn canonical_codes_ignore_relabeling((f, perm) in frame_and_perm(7)) {
        let g = f.permuted(&perm);
        prop_assert_eq!(canonical_code(&f), canonical_code(&g));
        prop_assert!(are_isomorphic(&f, &g));
        let iso = PMorphism::new(g.clone(), f.clone(), perm.clone());
        prop_assert_eq!(iso.check(true), Ok(()));
    }

    #[test]
    fn p_morphisms_compose((f, perm) in frame_and_perm(7)) {
        let g = f.permuted(&perm);
        let iso = PMorphism::new(g.clone(), f.clone(), perm);
        let sk = f.skeleton();
        let pi = PMorphism::new(f.clone(), sk.frame.clone(), sk.pi.clone());
        let both = iso.then(&pi).unwrap();
        prop_assert_eq!(both.check(true), Ok(()));
        if f.is_rooted() {
            let un = unravel_to_quasi_tree(&f).unwrap();
            prop_assert!(un.tree.classify().quasi_tree);
            prop_assert_eq!(un.morphism.then(&pi).unwrap().check(true), Ok(()));
        }
    }

    #[test]
    fn diamond_is_dual_to_box((f, a) in frame_and_set(7)) {
        let model = Model::new(f.clone(), Valuation::new().with("p", a.iter())).unwrap();
        let d = parse("<>p").unwrap();
        prop_assert_eq!(model.extension(&d), model.extension(&d.expand_diamonds()));
        prop_assert_eq!(model.extension(&d), f.down_set(a));
    }

    #[test]
    fn random_two_roaches_are_closed_and_unravel(seed in any::<u64>(), n in 4usize..=7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_two_roach(&mut rng, n);
        for w in f.worlds() {
            let (sub, _) = f.generated_subframe(w).unwrap();
            prop_assert!(is_2_roach(&sub).unwrap().is_some());
        }
        let r = roach_to_willow(&f).unwrap();
        prop_assert!(is_willow_tree(&r.tree).unwrap().is_some());
        prop_assert_eq!(r.morphism.check(true), Ok(()));
    }

    #[test]
    fn ordinals_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let o = random_ordinal(&mut rng, 3);
        prop_assert_eq!(o.to_string().parse::<Ordinal>().unwrap(), o.clone());
        prop_assert_eq!(Ordinal::from_terms(o.terms().to_vec()), o);
    }

    #[test]
    fn ordinal_reconstruction(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_noncompact_ordinal(&mut rng, 3);
        let t = tear_off(&g).unwrap();
        prop_assert_eq!((t.rest + Ordinal::one()) + Ordinal::omega_pow(t.alpha1), g);
    }

    #[test]
    fn ordinal_addition_laws(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_ordinal(&mut rng, 2);
        let b = random_ordinal(&mut rng, 2);
        let c = random_ordinal(&mut rng, 2);
        prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c));
        prop_assert!(a.clone() + b.clone() >= b.clone());
        prop_assert!(a.clone() + b.clone() >= a.clone());
        prop_assert_eq!(a.clone() + Ordinal::zero(), a);
    }
}
