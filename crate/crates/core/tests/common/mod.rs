//! Shared corpus and engine-independent oracles for the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nashfan_core::coeff::Coeff;
use nashfan_core::{Cone, Exponent, FieldSpec, SemigroupPolynomial};

pub const CORPUS_SEED: u64 = 0x6e61_7368;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn apply(m: [[i64; 2]; 2], v: &[i64]) -> Vec<i64> {
    vec![m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

fn mul(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// A product of two elementary shears with entries `±1`, possibly composed
/// with the coordinate swap.
pub fn random_unimodular(rng: &mut ChaCha8Rng) -> [[i64; 2]; 2] {
    let t1 = if rng.random_bool(0.5) { 1 } else { -1 };
    let t2 = if rng.random_bool(0.5) { 1 } else { -1 };
    let mut m = mul([[1, t1], [0, 1]], [[1, 0], [t2, 1]]);
    if rng.random_bool(0.5) {
        m = mul([[0, 1], [1, 0]], m);
    }
    m
}

fn moved(cone: &[Vec<i64>], m: [[i64; 2]; 2]) -> Cone {
    Cone::new(cone.iter().map(|r| apply(m, r)).collect()).expect("image of a cone is a cone")
}

/// All `cone((0,1),(m,−k))` with `gcd(m,k) = 1`, `0 < k < m`, `2 ≤ m ≤ 7`
/// (17 cones), every third one moved by a seeded unimodular map, followed
/// by three more seeded unimodular images.
pub fn singular_corpus() -> Vec<Cone> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    let mut base = Vec::new();
    for m in 2..=7i64 {
        for k in 1..m {
            if gcd(m, k) == 1 {
                base.push(vec![vec![0, 1], vec![m, -k]]);
            }
        }
    }
    let mut out = Vec::new();
    for (i, rays) in base.iter().enumerate() {
        if i % 3 == 2 {
            out.push(moved(rays, random_unimodular(&mut rng)));
        } else {
            out.push(Cone::new(rays.clone()).unwrap());
        }
    }
    while out.len() < 20 {
        let i = rng.random_range(0..base.len());
        out.push(moved(&base[i], random_unimodular(&mut rng)));
    }
    out
}

/// The positive quadrant and four seeded unimodular images of it.
pub fn regular_corpus() -> Vec<Cone> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED ^ 1);
    let quadrant = vec![vec![1, 0], vec![0, 1]];
    let mut out = vec![Cone::new(quadrant.clone()).unwrap()];
    while out.len() < 5 {
        out.push(moved(&quadrant, random_unimodular(&mut rng)));
    }
    out
}

/// `binom(a, k)` for any integer `a`.
pub fn gen_binomial(a: i64, k: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k as i64 {
        num *= BigInt::from(a - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// Coefficients of `s^i t^j`, `i + j ≤ n`, in `f(1+s, 1+t)`. Since `1` is a
/// smooth point of the torus, `f ∈ J_n` exactly when all of them vanish.
pub fn taylor_row(f: &SemigroupPolynomial, n: u32) -> Vec<Coeff> {
    let field = f.field();
    let mut out = Vec::new();
    for i in 0..=n {
        for j in 0..=n - i {
            let mut acc = field.zero();
            for (e, c) in f.terms() {
                let b = gen_binomial(e[0], i) * gen_binomial(e[1], j);
                acc = acc.checked_add(&c.checked_mul(&field.from_bigint(&b)).unwrap()).unwrap();
            }
            out.push(acc);
        }
    }
    out
}

/// Rank of a matrix over `field` by Gaussian elimination.
pub fn rank(field: FieldSpec, mut rows: Vec<Vec<Coeff>>) -> usize {
    let width = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    for r in rows.iter_mut() {
        r.resize(width, field.zero());
    }
    let mut rank = 0;
    for col in 0..width {
        let Some(piv) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = rows[rank][col].inv().unwrap();
        let pivot_row: Vec<Coeff> = rows[rank].iter().map(|x| x.checked_mul(&inv).unwrap()).collect();
        for i in 0..rows.len() {
            if i != rank && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for c in col..width {
                    let sub = factor.checked_mul(&pivot_row[c]).unwrap();
                    rows[i][c] = &rows[i][c] - &sub;
                }
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    rank
}

/// Columns indexed by `support`: the coefficient vector of `f`.
pub fn coords(f: &SemigroupPolynomial, support: &[Exponent]) -> Vec<Coeff> {
    support.iter().map(|e| f.coeff(e)).collect()
}

/// Number of points of `S = σ̌ ∩ ℤ²` outside `marks + S`, by enumerating a
/// box and checking facet inequalities directly. `None` when points not
/// divisible by any mark reach the box boundary.
pub fn staircase_by_enumeration(facet_normals: &[Vec<i64>], marks: &[Exponent], radius: i64) -> Option<usize> {
    let inside = |x: i64, y: i64| facet_normals.iter().all(|n| n[0] * x + n[1] * y >= 0);
    let mut count = 0;
    for x in -radius..=radius {
        for y in -radius..=radius {
            if !inside(x, y) {
                continue;
            }
            let divisible = marks.iter().any(|m| inside(x - m[0], y - m[1]));
            if !divisible {
                if x.abs() == radius || y.abs() == radius {
                    return None;
                }
                count += 1;
            }
        }
    }
    Some(count)
}

/// `𝒫_n` written out directly from the labeled points.
pub fn pn_points(n: i64) -> Vec<Exponent> {
    let mut pts = Vec::new();
    if n % 2 == 1 {
        let q0 = [(n + 3) / 2 + (n - 1) / 2, 1 + (n - 1)];
        pts.push([(n + 3) / 2, 0]);
        for i in 0..=(n - 1) / 2 {
            pts.push([q0[0] - i, q0[1] - 2 * i]);
            pts.push([q0[0] + i, q0[1] + 1 + 2 * i]);
        }
        pts.push([3 * (n + 1) / 2, 4 * (n + 1) / 2]);
    } else {
        let q0 = [(n + 2) / 2 + n / 2, n];
        pts.push([(n + 2) / 2, 0]);
        for i in 0..n / 2 {
            pts.push([q0[0] - i, q0[1] - 2 * i]);
        }
        for j in 0..=n / 2 {
            pts.push([q0[0] + j, q0[1] + 1 + 2 * j]);
        }
        pts.push([3 * (n + 2) / 2, 4 * (n + 2) / 2]);
    }
    let mut out: Vec<Exponent> = pts.into_iter().map(Exponent::from).collect();
    out.sort();
    out
}

/// Random polynomial with support in `support` and small integer coefficients.
pub fn random_poly(rng: &mut ChaCha8Rng, field: FieldSpec, support: &[Exponent], dim: usize) -> SemigroupPolynomial {
    let mut f = SemigroupPolynomial::zero(field, dim);
    for e in support {
        if rng.random_bool(0.4) {
            let c = rng.random_range(-5i64..=5);
            if c != 0 {
                f = &f + &SemigroupPolynomial::monomial(e.clone(), field.from_i64(c));
            }
        }
    }
    f
}

/// Rays `(0,1), (m,−k)` with `gcd(m,k) = 1` moved by a product of shears.
pub fn arb_cone() -> impl proptest::strategy::Strategy<Value = Cone> {
    use proptest::prelude::*;
    (2i64..=7, 1i64..7, -1i64..=1, -1i64..=1)
        .prop_filter("0 < k < m, coprime", |(m, k, _, _)| k < m && gcd(*m, *k) == 1)
        .prop_map(|(m, k, a, b)| {
            let t = mul([[1, a], [0, 1]], [[1, 0], [b, 1]]);
            moved(&[vec![0, 1], vec![m, -k]], t)
        })
}
