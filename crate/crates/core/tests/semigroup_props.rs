mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use nashfan_core::a3::a3_semigroup;
use nashfan_core::{dual_generators, AffineSemigroup, Cone, Exponent};

fn in_s(s: &AffineSemigroup, x: &[i64]) -> bool {
    s.facet_normals().iter().all(|n| n[0] * x[0] + n[1] * x[1] >= 0)
}

fn box_points(s: &AffineSemigroup, r: i64) -> Vec<[i64; 2]> {
    let mut out = Vec::new();
    for x in -r..=r {
        for y in -r..=r {
            if in_s(s, &[x, y]) {
                out.push([x, y]);
            }
        }
    }
    out
}

/// Positive weight on `σ̌ ∖ {0}`: the sum of the facet normals.
fn height(s: &AffineSemigroup, x: &[i64]) -> i64 {
    s.facet_normals().iter().map(|n| n[0] * x[0] + n[1] * x[1]).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generators_are_minimal_and_complete(cone in common::arb_cone()) {
        let s = dual_generators(&cone).unwrap();
        let r = 30;
        let pts = box_points(&s, r);
        // minimality: no generator splits as a sum of two nonzero elements
        for g in s.generators() {
            for h in &pts {
                let rest = [g[0] - h[0], g[1] - h[1]];
                let split = *h != [0, 0] && rest != [0, 0] && in_s(&s, &rest);
                prop_assert!(!split, "{:?} = {:?} + {:?}", g, h, rest);
            }
        }
        // completeness: every point of the box is a sum of generators
        let mut by_height = pts.clone();
        by_height.sort_by_key(|x| height(&s, x));
        let mut reached: BTreeSet<[i64; 2]> = BTreeSet::new();
        for x in by_height {
            let ok = x == [0, 0]
                || s.generators().iter().any(|g| reached.contains(&[x[0] - g[0], x[1] - g[1]]));
            if ok {
                reached.insert(x);
            }
            // points far from the origin may need summands outside the box
            if height(&s, &x) <= r {
                prop_assert!(ok, "{:?} is not a sum of generators", x);
            }
        }
    }

    #[test]
    fn common_multiples_are_minimal_and_complete(
        cone in common::arb_cone(),
        a in proptest::collection::vec(0usize..4, 4),
    ) {
        let s = dual_generators(&cone).unwrap();
        let gens = s.generators();
        let u = gens[a[0] % gens.len()].add(&gens[a[1] % gens.len()]);
        let v = gens[a[2] % gens.len()].scale(1 + a[3] as i64 % 2);
        let mcm = s.min_common_multiples(&u, &v).unwrap();
        prop_assert!(!mcm.is_empty());
        for m in &mcm {
            prop_assert!(s.divides(&u, m) && s.divides(&v, m));
        }
        for (i, m) in mcm.iter().enumerate() {
            for (j, k) in mcm.iter().enumerate() {
                prop_assert!(i == j || !s.divides(m, k));
            }
        }
        for x in box_points(&s, 40) {
            if s.divides(&u, &x) && s.divides(&v, &x) {
                prop_assert!(mcm.iter().any(|m| s.divides(m, &x)), "{:?} misses every minimal multiple", x);
            }
        }
    }

    #[test]
    fn divide_is_exact(cone in common::arb_cone(), x in -12i64..=12, y in -12i64..=12, k in 0usize..4) {
        let s = dual_generators(&cone).unwrap();
        let u = s.generators()[k % s.generators().len()].clone();
        let v = Exponent::from([x, y]);
        prop_assume!(in_s(&s, &v));
        match s.divide(&u, &v) {
            Some(w) => {
                prop_assert_eq!(u.add(&w), v);
                prop_assert!(in_s(&s, &w));
            }
            None => prop_assert!(!in_s(&s, &[v[0] - u[0], v[1] - u[1]])),
        }
    }
}

#[test]
fn a3_semigroup_shape() {
    let s = a3_semigroup();
    assert_eq!(s.edge_count(), 2);
    assert_eq!(s.generators().len(), 3);
    assert!(!s.is_regular());
}

#[test]
fn regular_corpus_has_two_generators() {
    for cone in common::regular_corpus() {
        let s = dual_generators(&cone).unwrap();
        assert_eq!(s.generators().len(), 2, "{cone:?}");
        assert!(s.is_regular());
    }
}

#[test]
fn corpus_is_deterministic() {
    assert_eq!(common::singular_corpus(), common::singular_corpus());
    assert_eq!(common::singular_corpus().len(), 20);
    let rays: BTreeSet<Vec<Vec<i64>>> = common::singular_corpus().iter().map(|c: &Cone| c.rays().to_vec()).collect();
    assert!(rays.len() >= 17);
}
