use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use twostep::cohomology::{
    cocycle_from_form, invariant_fingerprint, is_trivial_class, skew_symmetrize, triples_equivalent, verify_witness,
    EquivalenceVerdict,
};
use twostep::document::{emit_triple, parse_triple};
use twostep::group::{
    canonical_triple, commutator, conjugate, inverse, is_central, multiply, power, radical_basis, GroupElement,
    SkewTriple,
};
use twostep::linalg::{int_vec, random_unimodular, IntMatrix, SkewIntMatrix};
use twostep::nc_torus::{fiber_form, frac, trace_pairing, Character};
use twostep::reconstruction::{loop_winding, oracle_from_triple, recover_form, LoopShape, RecoveryConfig};

fn triple_strategy(max_m: usize, max_n: usize) -> impl Strategy<Value = SkewTriple> {
    (0..=max_m, 0..=max_n).prop_flat_map(|(m, n)| {
        prop::collection::vec(prop::collection::vec(-9i64..=9, n * n.saturating_sub(1) / 2), m).prop_map(
            move |forms| {
                SkewTriple::new(n, forms.iter().map(|u| SkewIntMatrix::from_upper(n, &int_vec(u))).collect())
                    .unwrap()
            },
        )
    })
}

fn element_strategy(t: &SkewTriple) -> impl Strategy<Value = GroupElement> {
    (prop::collection::vec(-20i64..=20, t.m()), prop::collection::vec(-20i64..=20, t.n()))
        .prop_map(|(a, b)| GroupElement::from_i64(&a, &b))
}

fn with_elements(k: usize) -> impl Strategy<Value = (SkewTriple, Vec<GroupElement>)> {
    triple_strategy(3, 4).prop_flat_map(move |t| {
        let elems = prop::collection::vec(element_strategy(&t), k);
        (Just(t), elems)
    })
}

fn unimodular(d: usize, seed: u64) -> IntMatrix {
    if d == 0 {
        IntMatrix::identity(0)
    } else {
        random_unimodular(d, seed, 2 * d + 4)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn group_axioms((t, e) in with_elements(3)) {
        let (x, y, z) = (&e[0], &e[1], &e[2]);
        let mul = |p: &GroupElement, q: &GroupElement| multiply(&t, p, q).unwrap();
        prop_assert_eq!(mul(&mul(x, y), z), mul(x, &mul(y, z)));
        prop_assert!(mul(x, &inverse(&t, x).unwrap()).is_identity());
        let c = commutator(&t, x, y).unwrap();
        prop_assert!(is_central(&t, &c).unwrap());
        prop_assert_eq!(conjugate(&t, y, x).unwrap(), mul(&commutator(&t, y, x).unwrap(), x));
        prop_assert_eq!(power(&t, x, 3).unwrap(), mul(x, &mul(x, x)));
        prop_assert!(mul(&power(&t, x, -2).unwrap(), &power(&t, x, 2).unwrap()).is_identity());
    }

    #[test]
    fn fingerprint_invariance(t in triple_strategy(2, 5), seed in any::<u64>()) {
        let s = t.act(&unimodular(t.m(), seed), &unimodular(t.n(), seed ^ 0xabc));
        prop_assert_eq!(invariant_fingerprint(&s), invariant_fingerprint(&t));
        prop_assert_eq!(radical_basis(&s).rank(), radical_basis(&t).rank());
    }

    #[test]
    fn scrambles_are_equivalent_for_small_rank(t in triple_strategy(3, 3), seed in any::<u64>()) {
        let s = t.act(&unimodular(t.m(), seed), &unimodular(t.n(), seed ^ 0x55));
        match triples_equivalent(&t, &s, 1) {
            EquivalenceVerdict::Equivalent { phi_a, phi_b } => prop_assert!(verify_witness(&t, &s, &phi_a, &phi_b)),
            v => prop_assert!(false, "{}", v.tag()),
        }
    }

    #[test]
    fn canonical_triple_is_nondegenerate_and_preserves_size(t in triple_strategy(2, 4)) {
        let c = canonical_triple(&t);
        prop_assert_eq!(c.m() + c.n(), t.m() + t.n());
        prop_assert_eq!(radical_basis(&c).rank(), 0);
        prop_assert_eq!(c.m(), t.m() + radical_basis(&t).rank());
    }

    #[test]
    fn coboundaries_do_not_change_the_form(t in triple_strategy(2, 4), s in -5i64..=5) {
        let sigma = cocycle_from_form(&t);
        let sym: Vec<IntMatrix> = (0..t.m()).map(|_| {
            let mut m = IntMatrix::zeros(t.n(), t.n());
            for i in 0..t.n() { for j in 0..t.n() { m[(i, j)] = BigInt::from(s * (i as i64 + j as i64 + 1)); } }
            m
        }).collect();
        let shifted = sigma.shifted(&sym).unwrap();
        prop_assert_eq!(skew_symmetrize(&shifted), t.clone());
        prop_assert_eq!(is_trivial_class(&shifted), t.is_abelian());
    }

    #[test]
    fn fiber_form_is_linear_in_the_character(
        t in triple_strategy(3, 4),
        xs in prop::collection::vec((-12i64..=12, 1i64..=12), 3),
        ys in prop::collection::vec((-12i64..=12, 1i64..=12), 3),
    ) {
        let chi = Character::from_ratios(&xs[..t.m()]);
        let psi = Character::from_ratios(&ys[..t.m()]);
        let sum = fiber_form(&t, &chi.add(&psi)).unwrap();
        prop_assert_eq!(sum, fiber_form(&t, &chi).unwrap().add(&fiber_form(&t, &psi).unwrap()));
    }

    #[test]
    fn pairing_is_antisymmetric(
        (t, e) in with_elements(2),
        xs in prop::collection::vec((-12i64..=12, 1i64..=12), 3),
    ) {
        let chi = Character::from_ratios(&xs[..t.m()]);
        let s = trace_pairing(&t, &chi, &e[0].b, &e[1].b).unwrap() + trace_pairing(&t, &chi, &e[1].b, &e[0].b).unwrap();
        prop_assert!(frac(&s).is_zero());
        prop_assert!(trace_pairing(&t, &chi, &e[0].b, &e[0].b).unwrap().is_zero());
    }

    #[test]
    fn document_round_trip(t in triple_strategy(3, 4)) {
        let text = emit_triple(&t);
        let back = parse_triple(&text).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(emit_triple(&back), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn loop_independence(t in triple_strategy(2, 4).prop_filter("needs a pair", |t| t.m() > 0 && t.n() > 1)) {
        let oracle = oracle_from_triple(&t, None, None).unwrap();
        let cfg = RecoveryConfig::default();
        for k in 0..t.m() {
            let fwd = loop_winding(&oracle, (k, 0, 1), LoopShape::default(), &cfg).unwrap().value;
            let back = loop_winding(&oracle, (k, 0, 1), LoopShape { reverse: true, repeats: 1 }, &cfg).unwrap().value;
            let twice = loop_winding(&oracle, (k, 0, 1), LoopShape { reverse: false, repeats: 2 }, &cfg).unwrap().value;
            prop_assert_eq!(&back, &-&fwd);
            prop_assert_eq!(&twice, &(&fwd * 2));
            prop_assert_eq!(&fwd, t.forms()[k].get(0, 1));
        }
    }

    #[test]
    fn recovery_from_moved_base_point(t in triple_strategy(2, 3), p in 0i64..7) {
        let cfg = RecoveryConfig {
            base: Some(Character::new((0..t.m()).map(|_| BigRational::new(p.into(), 7.into())).collect())),
            ..RecoveryConfig::default()
        };
        let oracle = oracle_from_triple(&t, None, None).unwrap();
        prop_assert_eq!(recover_form(&oracle, &cfg).unwrap().form, t);
    }
}

#[test]
fn scrambled_recovery_matches_hidden_form() {
    for seed in 0..20u64 {
        let t = SkewTriple::from_i64(4, &[
            vec![vec![0, 1, 0, 0], vec![-1, 0, 0, 0], vec![0, 0, 0, 3], vec![0, 0, -3, 0]],
        ])
        .unwrap();
        let oracle = oracle_from_triple(&t, Some(seed), None).unwrap();
        let rec = recover_form(&oracle, &RecoveryConfig::default()).unwrap();
        assert_eq!(rec.form, oracle.hidden_form());
        assert_eq!(invariant_fingerprint(&rec.form), invariant_fingerprint(&t));
        assert!(triples_equivalent(&rec.form, &t, 1).is_equivalent());
    }
}
