mod common;

use std::cmp::Ordering;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nashfan_core::a3::{a3_order, a3_semigroup};
use nashfan_core::groebner::{
    buchberger, buchberger_with, member, staircase_dimension, BuchbergerOptions, Ideal, PairSelection, Staircase,
};
use nashfan_core::nash::build_jn;
use nashfan_core::{dual_generators, AffineSemigroup, Exponent, FieldSpec, SemigroupPolynomial, TermOrder};

fn field(p: u64) -> FieldSpec {
    if p == 0 {
        FieldSpec::RATIONALS
    } else {
        FieldSpec::new(p).unwrap()
    }
}

fn element(s: &AffineSemigroup, coeffs: &[u8]) -> Exponent {
    let mut e = Exponent::zero(2);
    for (g, &k) in s.generators().iter().zip(coeffs) {
        e = e.add(&g.scale(k as i64));
    }
    e
}

fn arb_a3_poly() -> impl Strategy<Value = SemigroupPolynomial> {
    proptest::collection::vec((proptest::collection::vec(0u8..4, 3), -6i64..=6), 1..6).prop_map(|terms| {
        let s = a3_semigroup();
        let mut f = SemigroupPolynomial::zero(FieldSpec::RATIONALS, 2);
        for (c, k) in terms {
            let e = element(&s, &c);
            f = &f + &SemigroupPolynomial::monomial(e, FieldSpec::RATIONALS.from_i64(k));
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn order_is_total_and_translation_invariant(
        cone in common::arb_cone(),
        a in proptest::collection::vec(0u8..5, 4),
        b in proptest::collection::vec(0u8..5, 4),
        c in proptest::collection::vec(0u8..5, 4),
    ) {
        let s = dual_generators(&cone).unwrap();
        let order = TermOrder::default_for(&s).unwrap();
        let (u, v, w) = (element(&s, &a), element(&s, &b), element(&s, &c));
        let cmp = order.compare(&u, &v);
        prop_assert_eq!(cmp == Ordering::Equal, u == v);
        prop_assert_eq!(order.compare(&v, &u), cmp.reverse());
        prop_assert_eq!(order.compare(&u.add(&w), &v.add(&w)), cmp);
        for g in s.generators() {
            prop_assert_eq!(order.compare(g, &Exponent::zero(2)), Ordering::Greater);
        }
    }

    #[test]
    fn leading_term_of_product(f in arb_a3_poly(), g in arb_a3_poly()) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        let o = a3_order();
        let (ef, cf) = f.leading(&o).unwrap();
        let (eg, cg) = g.leading(&o).unwrap();
        let (efg, cfg) = (&f * &g).leading(&o).unwrap();
        prop_assert_eq!(efg, ef.add(&eg));
        prop_assert_eq!(cfg, cf.checked_mul(&cg).unwrap());
    }

    #[test]
    fn normal_form_is_idempotent(f in arb_a3_poly(), n in 1usize..4) {
        let b = buchberger(&build_jn(&a3_semigroup(), n, FieldSpec::RATIONALS), &a3_order()).unwrap();
        let r = b.normal_form(&f).unwrap();
        prop_assert_eq!(b.normal_form(&r).unwrap(), r.clone());
        // f − NF(f) lies in the ideal
        prop_assert!(b.normal_form(&(&f - &r)).unwrap().is_zero());
        for t in r.support() {
            prop_assert!(b.marks().iter().all(|m| !a3_semigroup().divides(m, t)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn smooth_point_dimension(cone in common::arb_cone(), n in 1usize..=4, p in prop::sample::select(vec![0u64, 2, 3])) {
        let s = dual_generators(&cone).unwrap();
        let order = TermOrder::default_for(&s).unwrap();
        let b = buchberger(&build_jn(&s, n, field(p)), &order).unwrap();
        let want = ((n + 1) * (n + 2) / 2) as u64;
        prop_assert_eq!(staircase_dimension(&b.marks(), &s).unwrap(), Staircase::Finite(want));
        let counted = common::staircase_by_enumeration(s.facet_normals(), &b.marks(), 120);
        prop_assert_eq!(counted, Some(want as usize));
    }

    #[test]
    fn basis_independent_of_input_order(cone in common::arb_cone(), n in 1usize..=3, seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let s = dual_generators(&cone).unwrap();
        let order = TermOrder::default_for(&s).unwrap();
        let ideal = build_jn(&s, n, field(5));
        let b = buchberger(&ideal, &order).unwrap();
        let mut gens = ideal.generators().to_vec();
        gens.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let shuffled = Ideal::new(field(5), gens, s.clone()).unwrap();
        let fifo = BuchbergerOptions { selection: PairSelection::Fifo };
        prop_assert_eq!(buchberger_with(&shuffled, &order, fifo).unwrap(), b.clone());
        prop_assert_eq!(buchberger(&ideal.reversed(), &order).unwrap(), b.clone());
        prop_assert!(b.reduced());
        prop_assert!(b.spairs_reduce_to_zero().unwrap());
    }
}

/// Every product `x^m · g` of a monomial with a generator of `J_n` is a
/// member, and so is any combination of them.
#[test]
fn spanned_elements_are_members() {
    use rand::Rng;
    let s = a3_semigroup();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in 1..=2 {
        let ideal = build_jn(&s, n, FieldSpec::RATIONALS);
        let b = buchberger(&ideal, &a3_order()).unwrap();
        let shifts: Vec<Exponent> = (0..4u8)
            .flat_map(|i| (0..3u8).map(move |j| [i, j, 0]))
            .map(|c| element(&s, &c))
            .collect();
        for _ in 0..30 {
            let mut f = SemigroupPolynomial::zero(FieldSpec::RATIONALS, 2);
            for g in ideal.generators() {
                if rng.random_bool(0.3) {
                    let m = &shifts[rng.random_range(0..shifts.len())];
                    let k = FieldSpec::RATIONALS.from_i64(rng.random_range(-4..=4));
                    f = &f + &g.shift(m, &k);
                }
            }
            assert!(b.normal_form(&f).unwrap().is_zero());
        }
    }
}

#[test]
fn binomial_powers_below_n_plus_one_are_not_members() {
    let s = a3_semigroup();
    for n in 1..=3usize {
        let ideal = build_jn(&s, n, FieldSpec::RATIONALS);
        for g in s.generators() {
            let b = SemigroupPolynomial::binomial_minus_one(FieldSpec::RATIONALS, g);
            assert!(!member(&b.pow(n as u32), &ideal, &a3_order()).unwrap());
            assert!(member(&b.pow(n as u32 + 1), &ideal, &a3_order()).unwrap());
        }
    }
}
