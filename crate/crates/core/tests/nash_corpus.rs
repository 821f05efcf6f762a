mod common;

use nashfan_core::a3::{a3_cone, a3_semigroup};
use nashfan_core::nash::{construct_witness, nobile_decide, non_membership_suite, verify_witness, NobileVerdict};
use nashfan_core::poly::int_weight;
use nashfan_core::{dual_generators, Exponent, FieldSpec, SemigroupPolynomial};

#[test]
fn corpus_witnesses_and_verdicts() {
    for cone in common::singular_corpus() {
        let s = dual_generators(&cone).unwrap();
        for p in [2u64, 3, 5, 7] {
            for n in 1..=2 {
                let wit = construct_witness(&s, p, n).unwrap();
                let report = verify_witness(&wit, &s);
                assert!(report.passed(), "{cone:?}, p = {p}, n = {n}: {:?}", report.failures());
                match nobile_decide(&cone, n, FieldSpec::new(p).unwrap()).unwrap() {
                    NobileVerdict::SingularSubdivided { fan, witness } => {
                        assert!(fan.cells.len() >= 2);
                        assert_eq!(witness.as_ref(), Some(&wit));
                    }
                    v => panic!("{cone:?}: {}", v.name()),
                }
            }
        }
    }
}

/// `h` has a unique `w`-maximal term, at `n·a_i`, checked here by direct
/// weight comparison rather than through the verifier.
#[test]
fn witness_leading_term_power_law() {
    for cone in common::singular_corpus().into_iter().chain([a3_cone()]) {
        let s = dual_generators(&cone).unwrap();
        for (p, n) in [(2u64, 1usize), (3, 2), (5, 3)] {
            let wit = construct_witness(&s, p, n).unwrap();
            let a = &s.generators()[wit.edge_index - 1];
            let top = a.scale(n as i64);
            let weight = |e: &Exponent| e.iter().zip(&wit.w).map(|(x, y)| x * y).sum::<i64>();
            let w_top = weight(&top);
            assert!(!wit.h.coeff(&top).is_zero());
            for e in wit.h.support() {
                assert!(e == &top || weight(e) < w_top, "{cone:?}: {e:?} ties with n·a_i");
            }
            let f = FieldSpec::new(p).unwrap();
            let init = wit.h.initial_form(&int_weight(&wit.w)).unwrap();
            assert_eq!(init, SemigroupPolynomial::monomial(top, wit.h.coeff(&a.scale(n as i64))));
            assert_eq!(wit.h.field(), f);
        }
    }
}

#[test]
fn tampered_witnesses_are_rejected() {
    let s = a3_semigroup();
    let wit = construct_witness(&s, 5, 2).unwrap();
    let mut bad = wit.clone();
    bad.w = vec![0, 1];
    assert!(!verify_witness(&bad, &s).passed());
    let mut bad = wit.clone();
    bad.relation.lambda[0] += 1;
    assert!(!verify_witness(&bad, &s).passed());
    let mut bad = wit;
    bad.delta[0] += 1;
    assert!(!verify_witness(&bad, &s).passed());
}

#[test]
fn regular_cones_are_smooth_verdicts() {
    for cone in common::regular_corpus() {
        for n in 1..=3 {
            let v = nobile_decide(&cone, n, FieldSpec::new(3).unwrap()).unwrap();
            assert!(matches!(v, NobileVerdict::NonSingularTrivialFan { .. }), "{cone:?}");
        }
    }
}

#[test]
fn non_membership_on_corpus() {
    let cones = common::singular_corpus().into_iter().chain([a3_cone()]);
    for cone in cones {
        let s = dual_generators(&cone).unwrap();
        for n in 1..=3 {
            assert!(non_membership_suite(&s, n, FieldSpec::new(3).unwrap()).unwrap(), "{cone:?}, n = {n}");
        }
    }
}
