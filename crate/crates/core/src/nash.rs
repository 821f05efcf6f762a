//! `J_n`, the decision whether the normalized higher Nash blowup of a toric
//! surface is trivial, and certificates `(h, w)` of a non-trivial Gröbner fan
//! in prime characteristic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::coeff::FieldSpec;
use crate::error::{Error, Result};
use crate::fan::{groebner_fan_2d, FanJson, GroebnerFan2};
use crate::groebner::{buchberger, Ideal};
use crate::lattice::{dot, primitive, rank, solve_columns};
use crate::poly::{SemigroupPolynomial, TermOrder};
use crate::semigroup::{dual_generators, AffineSemigroup, Cone, Exponent};

/// `J_n = (J_0)^{n+1}` with `J_0 = ⟨x^{a_i} − 1⟩`.
pub fn build_jn(s: &AffineSemigroup, n: usize, field: FieldSpec) -> Ideal {
    Ideal::augmentation_power(s, n, field)
}

/// A binomial relation `Σ_{k<t} λ_k a_{i_k} = Σ_{k≥t} λ_k a_{i_k}` among
/// `d + 1` generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub lambda: Vec<u64>,
    pub split: usize,
}

/// `h ∈ J_n` together with a weight `w` in the interior of `σ` such that the
/// `w`-leading term of `h` is `x^{n·a_i}` for an edge generator `a_i`.
///
/// `edge_index` and `indices` are 1-based generator positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub h: SemigroupPolynomial,
    pub w: Vec<i64>,
    pub edge_index: usize,
    pub n: usize,
    pub relation: Relation,
    pub delta: Vec<i64>,
    pub indices: Vec<usize>,
}

impl Witness {
    pub fn characteristic(&self) -> u64 {
        self.h.field().characteristic()
    }
}

/// Builds a witness following the case analysis on the number `r` of edges
/// of `σ̌` and on which relation coefficients are divisible by `p`.
pub fn construct_witness(s: &AffineSemigroup, p: u64, n: usize) -> Result<Witness> {
    if p == 0 {
        return Err(Error::InvalidInput(
            "witnesses are built in positive characteristic only".into(),
        ));
    }
    let field = FieldSpec::new(p)?;
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    if s.is_regular() {
        return Err(Error::RegularCone);
    }
    let d = s.dim();
    let r = s.edge_count();
    let gens = s.generators();

    let (subset, extra) = if r > d {
        let subset = first_independent_subset(&gens[..r], d)
            .ok_or_else(|| Error::InvariantViolation("edges do not span".into()))?;
        let extra = (0..r).find(|i| !subset.contains(i)).expect("r > d");
        (subset, extra)
    } else {
        ((0..d).collect::<Vec<_>>(), r)
    };

    // Σ λ'_k a_{subset_k} = a_extra, cleared to integers
    let cols: Vec<Vec<i64>> = subset.iter().map(|&i| gens[i].to_vec()).collect();
    let lam = solve_columns(&cols, &gens[extra])
        .ok_or_else(|| Error::InvariantViolation("chosen generators are dependent".into()))?;
    let lcm = lam.iter().fold(BigInt::from(1), |acc, q| acc.lcm(q.denom()));
    let mut coeffs: Vec<(usize, i64)> = subset
        .iter()
        .zip(&lam)
        .map(|(&i, q)| (i, (q.numer() * (&lcm / q.denom())).to_i64().expect("small relation")))
        .collect();
    coeffs.push((extra, -lcm.to_i64().expect("small relation")));
    strip_p_powers(&mut coeffs, p);

    let pos_of = |i: usize| coeffs.iter().find(|c| c.0 == i).map(|c| c.1).unwrap_or(0);
    let (edge, w) = if r > d {
        // any nonzero δ on an edge works; choose w making the top term unique
        let support: Vec<usize> = coeffs
            .iter()
            .filter(|c| c.1.rem_euclid(p as i64) != 0)
            .map(|c| c.0)
            .collect();
        lexicographic_weight(s, &support)?
    } else {
        let Some(i) = (0..d).rev().find(|&i| pos_of(i).rem_euclid(p as i64) != 0) else {
            return Err(Error::InvariantViolation(
                "p divides every edge coefficient of the relation".into(),
            ));
        };
        (i, facet_perturbation(s, i, extra)?)
    };

    // LHS: positive coefficients; RHS: the rest, as magnitudes
    let mut lhs: Vec<(usize, i64)> = coeffs.iter().filter(|c| c.1 > 0).copied().collect();
    let rhs: Vec<(usize, i64)> = coeffs.iter().filter(|c| c.1 <= 0).map(|&(i, c)| (i, -c)).collect();
    let split = lhs.len();
    lhs.extend(rhs);
    let indices: Vec<usize> = lhs.iter().map(|c| c.0 + 1).collect();
    let lambda: Vec<u64> = lhs.iter().map(|c| c.1 as u64).collect();
    let delta: Vec<i64> = lambda
        .iter()
        .enumerate()
        .map(|(k, &l)| {
            let m = (l % p) as i64;
            if k < split {
                m
            } else {
                -m
            }
        })
        .collect();
    let h = witness_polynomial(s, field, &indices, &delta, edge + 1, n);
    Ok(Witness {
        h,
        w,
        edge_index: edge + 1,
        n,
        relation: Relation { lambda, split },
        delta,
        indices,
    })
}

/// `h = (Σ δ_k x^{a_{i_k}} + c)·(x^{a_e} − 1)^{n−1}` with `c = −Σ δ_k`.
fn witness_polynomial(
    s: &AffineSemigroup,
    field: FieldSpec,
    indices: &[usize],
    delta: &[i64],
    edge_index: usize,
    n: usize,
) -> SemigroupPolynomial {
    let d = s.dim();
    let mut h1 = SemigroupPolynomial::zero(field, d);
    for (&i, &dl) in indices.iter().zip(delta) {
        let m = SemigroupPolynomial::monomial(s.generators()[i - 1].clone(), field.from_i64(dl));
        h1 = &h1 + &m;
    }
    let c: i64 = -delta.iter().sum::<i64>();
    h1 = &h1 + &SemigroupPolynomial::constant(field, d, field.from_i64(c));
    let b = SemigroupPolynomial::binomial_minus_one(field, &s.generators()[edge_index - 1]);
    &h1 * &b.pow((n - 1) as u32)
}

fn strip_p_powers(coeffs: &mut [(usize, i64)], p: u64) {
    let p = p as i64;
    while coeffs.iter().all(|c| c.1 % p == 0) && coeffs.iter().any(|c| c.1 != 0) {
        for c in coeffs.iter_mut() {
            c.1 /= p;
        }
    }
}

fn first_independent_subset(vs: &[Exponent], d: usize) -> Option<Vec<usize>> {
    let mut idx: Vec<usize> = (0..d).collect();
    if vs.len() < d {
        return None;
    }
    loop {
        let rows: Vec<Vec<i64>> = idx.iter().map(|&i| vs[i].to_vec()).collect();
        if rank(&rows) == d {
            return Some(idx);
        }
        // next combination in lexicographic order
        let k = (0..d).rev().find(|&k| idx[k] < vs.len() - d + k)?;
        idx[k] += 1;
        for j in k + 1..d {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Primitive sum of the rays of `σ`; it pairs positively with every
/// nonzero element of `S`.
fn interior_direction(s: &AffineSemigroup) -> Vec<i64> {
    let mut rho = vec![0i64; s.dim()];
    for nrm in s.facet_normals() {
        for (a, b) in rho.iter_mut().zip(nrm) {
            *a += b;
        }
    }
    primitive(&rho)
}

/// Interior weight `w = N^d ρ + N^{d−1} e_1 + … + e_d` for the first doubling
/// of `N` at which one generator in `support` has strictly largest weight.
fn lexicographic_weight(s: &AffineSemigroup, support: &[usize]) -> Result<(usize, Vec<i64>)> {
    let d = s.dim();
    let rho = interior_direction(s);
    let gens = s.generators();
    let mut big = 1i64;
    for _ in 0..40 {
        let mut w = vec![0i64; d];
        let mut scale = 1i64;
        for k in (0..d).rev() {
            w[k] += scale;
            scale *= big;
        }
        for (a, b) in w.iter_mut().zip(&rho) {
            *a += scale * b;
        }
        let w = primitive(&w);
        let interior = gens.iter().all(|g| dot(&w, g) > 0);
        let weights: Vec<i64> = support.iter().map(|&i| dot(&w, &gens[i])).collect();
        let top = *weights.iter().max().expect("nonempty support");
        if interior && weights.iter().filter(|&&x| x == top).count() == 1 {
            let pos = weights.iter().position(|&x| x == top).expect("max exists");
            return Ok((support[pos], w));
        }
        big *= 2;
    }
    Err(Error::InvariantViolation("no separating interior weight".into()))
}

/// `w' = N·w + ρ` with `w` the ray of `σ` orthogonal to the edges other than
/// `a_i`, and `N` the least positive integer giving `0 < w'·a_j < w'·a_i` for
/// the other edges and `w'·a_extra < w'·a_i`.
fn facet_perturbation(s: &AffineSemigroup, i: usize, extra: usize) -> Result<Vec<i64>> {
    let d = s.dim();
    let gens = s.generators();
    let w = s
        .facet_normals()
        .iter()
        .find(|nrm| (0..d).filter(|&j| j != i).all(|j| dot(nrm, &gens[j]) == 0) && dot(nrm, &gens[i]) > 0)
        .cloned()
        .ok_or_else(|| Error::InvariantViolation("no facet normal for the chosen edge".into()))?;
    let rho = interior_direction(s);
    for big in 1..=1_000_000i64 {
        let wp: Vec<i64> = w.iter().zip(&rho).map(|(a, b)| big * a + b).collect();
        let top = dot(&wp, &gens[i]);
        let ok = (0..d)
            .filter(|&j| j != i)
            .all(|j| {
                let x = dot(&wp, &gens[j]);
                0 < x && x < top
            })
            && dot(&wp, &gens[extra]) < top
            && gens.iter().all(|g| dot(&wp, g) > 0);
        if ok {
            return Ok(primitive(&wp));
        }
    }
    Err(Error::InvariantViolation("perturbation bound exceeded".into()))
}

/// Outcome of [`verify_witness`], one flag per check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    /// The relation balances: `f` lies in the kernel of `y_i ↦ x^{a_i}`.
    pub relation: bool,
    /// `f` has no constant term about `(1, …, 1)`, its linear part is `δ`,
    /// and `h` is the lift of that linear part.
    pub linear_part: bool,
    /// `w` pairs positively with every generator.
    pub interior: bool,
    /// The strict `w`-leading term of `h` is `x^{n·a_i}` on an edge.
    pub leading_term: bool,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.relation && self.linear_part && self.interior && self.leading_term
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.relation {
            out.push("a");
        }
        if !self.linear_part {
            out.push("b");
        }
        if !self.interior {
            out.push("c");
        }
        if !self.leading_term {
            out.push("d");
        }
        out
    }
}

/// Constant and linear coefficients of a power series in `z_1, …, z_m`,
/// truncated modulo `(z)^2`, with entries in `ℤ/p`.
#[derive(Clone)]
struct Linear {
    constant: i64,
    linear: Vec<i64>,
    p: i64,
}

impl Linear {
    fn one(m: usize, p: i64) -> Self {
        Linear {
            constant: 1,
            linear: vec![0; m],
            p,
        }
    }

    /// `y_k = 1 + z_k`.
    fn var(m: usize, k: usize, p: i64) -> Self {
        let mut l = Linear::one(m, p);
        l.linear[k] = 1;
        l
    }

    fn mul(&self, o: &Linear) -> Linear {
        let p = self.p;
        Linear {
            constant: (self.constant * o.constant).rem_euclid(p),
            linear: self
                .linear
                .iter()
                .zip(&o.linear)
                .map(|(a, b)| (self.constant * b + o.constant * a).rem_euclid(p))
                .collect(),
            p,
        }
    }

    fn pow(&self, mut e: u64) -> Linear {
        let mut acc = Linear::one(self.linear.len(), self.p);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    fn sub(&self, o: &Linear) -> Linear {
        let p = self.p;
        Linear {
            constant: (self.constant - o.constant).rem_euclid(p),
            linear: self.linear.iter().zip(&o.linear).map(|(a, b)| (a - b).rem_euclid(p)).collect(),
            p,
        }
    }
}

/// Rechecks a witness from its data alone.
pub fn verify_witness(wit: &Witness, s: &AffineSemigroup) -> WitnessReport {
    let d = s.dim();
    let gens = s.generators();
    let p = wit.characteristic();
    let m = wit.indices.len();
    let shapes_ok = p > 0
        && m == wit.relation.lambda.len()
        && m == wit.delta.len()
        && wit.relation.split <= m
        && wit.indices.iter().all(|&i| (1..=gens.len()).contains(&i))
        && wit.w.len() == d
        && wit.n >= 1
        && (1..=s.edge_count()).contains(&wit.edge_index);
    if !shapes_ok {
        return WitnessReport {
            relation: false,
            linear_part: false,
            interior: false,
            leading_term: false,
        };
    }
    let t = wit.relation.split;

    // (a) exponent bookkeeping
    let mut lhs = vec![0i64; d];
    let mut rhs = vec![0i64; d];
    for (k, (&i, &l)) in wit.indices.iter().zip(&wit.relation.lambda).enumerate() {
        let side = if k < t { &mut lhs } else { &mut rhs };
        for (acc, x) in side.iter_mut().zip(gens[i - 1].iter()) {
            *acc += l as i64 * x;
        }
    }
    let mut distinct = wit.indices.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let relation = lhs == rhs && distinct.len() == m && t >= 1 && t < m;

    // (b) truncated expansion of f about (1, …, 1)
    let pi = p as i64;
    let side = |range: std::ops::Range<usize>| {
        range.fold(Linear::one(m, pi), |acc, k| acc.mul(&Linear::var(m, k, pi).pow(wit.relation.lambda[k])))
    };
    let f = side(0..t).sub(&side(t..m));
    let delta_ok = f.constant == 0
        && f.linear
            .iter()
            .zip(&wit.delta)
            .all(|(a, b)| *a == b.rem_euclid(pi));
    let field = wit.h.field();
    let expected_h = witness_polynomial(s, field, &wit.indices, &wit.delta, wit.edge_index, wit.n);
    let linear_part = delta_ok && expected_h == wit.h;

    // (c) interior of σ
    let interior = gens.iter().all(|g| dot(&wit.w, g) > 0);

    // (d) strict leading term under w alone
    let target = gens[wit.edge_index - 1].scale(wit.n as i64);
    let weights: Vec<(i64, &Exponent)> = wit.h.support().map(|u| (dot(&wit.w, u), u)).collect();
    let leading_term = match weights.iter().map(|x| x.0).max() {
        Some(top) => {
            let tops: Vec<&Exponent> = weights.iter().filter(|x| x.0 == top).map(|x| x.1).collect();
            tops.len() == 1 && *tops[0] == target && !wit.h.coeff(&target).is_zero()
        }
        None => false,
    };

    WitnessReport {
        relation,
        linear_part,
        interior,
        leading_term,
    }
}

/// Result of the smoothness decision for a 2-dimensional cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NobileVerdict {
    NonSingularTrivialFan {
        fan: GroebnerFan2,
    },
    SingularSubdivided {
        fan: GroebnerFan2,
        witness: Option<Witness>,
    },
}

impl NobileVerdict {
    pub fn fan(&self) -> &GroebnerFan2 {
        match self {
            NobileVerdict::NonSingularTrivialFan { fan } => fan,
            NobileVerdict::SingularSubdivided { fan, .. } => fan,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            NobileVerdict::NonSingularTrivialFan { .. } => "NonSingularTrivialFan",
            NobileVerdict::SingularSubdivided { .. } => "SingularSubdivided",
        }
    }

    pub fn to_json(&self) -> VerdictJson {
        let fan = self.fan();
        VerdictJson {
            verdict: self.name().to_string(),
            fan: fan.to_json(),
            all_cells_regular: fan.all_regular(),
            nonregular_cells: fan
                .regularity_report()
                .into_iter()
                .filter(|c| !c.1)
                .map(|c| c.0)
                .collect(),
            witness: match self {
                NobileVerdict::SingularSubdivided { witness, .. } => witness.clone(),
                NobileVerdict::NonSingularTrivialFan { .. } => None,
            },
        }
    }
}

/// Serializable form of a [`NobileVerdict`].
///
/// `all_cells_regular` is the verdict on the normalized blowup; a listed
/// non-regular cell is the certificate used for `A_3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub verdict: String,
    pub fan: FanJson,
    pub all_cells_regular: bool,
    pub nonregular_cells: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// Computes `GF(J_n)` and checks it against the smoothness of the cone.
pub fn nobile_decide(cone: &Cone, n: usize, field: FieldSpec) -> Result<NobileVerdict> {
    if cone.dim() != 2 {
        return Err(Error::DimensionUnsupported(cone.dim()));
    }
    let s = dual_generators(cone)?;
    let sigma = s.sigma();
    let base = TermOrder::default_for(&s)?;
    let fan = groebner_fan_2d(&build_jn(&s, n, field), &sigma, &base)?;
    let singular = !s.is_regular();
    if singular == fan.is_trivial() {
        return Err(Error::InvariantViolation(format!(
            "singular = {singular} but trivial fan = {}",
            fan.is_trivial()
        )));
    }
    if !singular {
        return Ok(NobileVerdict::NonSingularTrivialFan { fan });
    }
    let witness = if field.is_rational() || n == 0 {
        None
    } else {
        let wit = construct_witness(&s, field.characteristic(), n)?;
        let report = verify_witness(&wit, &s);
        if !report.passed() {
            return Err(Error::InvariantViolation(format!(
                "witness failed checks {:?}",
                report.failures()
            )));
        }
        Some(wit)
    };
    Ok(NobileVerdict::SingularSubdivided { fan, witness })
}

/// `(x^{a_i} − 1)^m ∉ J_n` for every generator and every `1 ≤ m ≤ n`.
pub fn non_membership_suite(s: &AffineSemigroup, n: usize, field: FieldSpec) -> Result<bool> {
    let order = TermOrder::default_for(s)?;
    let basis = buchberger(&build_jn(s, n, field), &order)?;
    for g in s.generators() {
        let b = SemigroupPolynomial::binomial_minus_one(field, g);
        let mut power = SemigroupPolynomial::one(field, s.dim());
        for _ in 1..=n {
            power = &power * &b;
            if basis.normal_form(&power)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
