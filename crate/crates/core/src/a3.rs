//! The `A_3` surface `xy = z^4`: the point sets `𝒫_n`, the explicit families
//! `g_n`, `h_n`, `G_n`, and a verification pipeline over `ℚ` and `𝔽_p`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::coeff::FieldSpec;
use crate::error::{Error, Result};
use crate::fan::cone_of_basis;
use crate::groebner::{buchberger, interreduce, staircase_dimension, MarkedBasis, Staircase};
use crate::lattice::det2;
use crate::nash::{build_jn, non_membership_suite};
use crate::poly::{SemigroupPolynomial, TermOrder};
use crate::semigroup::{dual_generators, AffineSemigroup, Cone, Exponent};

/// `σ = cone((0,1), (4,−3))`.
pub fn a3_cone() -> Cone {
    Cone::new(vec![vec![0, 1], vec![4, -3]]).expect("valid cone")
}

/// `σ̌ ∩ ℤ² = ℕ((1,0), (3,4), (1,1))`.
pub fn a3_semigroup() -> AffineSemigroup {
    dual_generators(&a3_cone()).expect("valid cone")
}

/// The matrix order with rows `(2,−1)` and `(1,1)`.
pub fn a3_order() -> TermOrder {
    TermOrder::matrix(TermOrder::a3_base(), &a3_semigroup()).expect("positive on generators")
}

fn pt(x: i64, y: i64) -> Exponent {
    Exponent::from([x, y])
}

/// The labeled points `p_n`, `q_n^i`, `r_n^j`, `s_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PnSet {
    pub n: usize,
    pub p: Exponent,
    pub q: Vec<Exponent>,
    pub r: Vec<Exponent>,
    pub s: Exponent,
}

impl PnSet {
    /// Points in the order `p, q^0, …, r^0, …, s`.
    pub fn points(&self) -> Vec<Exponent> {
        let mut out = vec![self.p.clone()];
        out.extend(self.q.iter().cloned());
        out.extend(self.r.iter().cloned());
        out.push(self.s.clone());
        out
    }

    pub fn labeled(&self) -> Vec<(String, Exponent)> {
        let mut out = vec![("p".to_string(), self.p.clone())];
        out.extend(self.q.iter().enumerate().map(|(i, e)| (format!("q{i}"), e.clone())));
        out.extend(self.r.iter().enumerate().map(|(j, e)| (format!("r{j}"), e.clone())));
        out.push(("s".to_string(), self.s.clone()));
        out
    }

    pub fn len(&self) -> usize {
        self.q.len() + self.r.len() + 2
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// `𝒫_n` for `n ≥ 1`.
pub fn pn_set(n: usize) -> Result<PnSet> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let m = n as i64;
    let set = if n % 2 == 1 {
        let h = (m - 1) / 2;
        let p = pt((m + 3) / 2, 0);
        let q0 = pt((m + 3) / 2 + h, 1 + 2 * h);
        let q = (0..=h).map(|i| pt(q0[0] - i, q0[1] - 2 * i)).collect();
        let r0 = pt(q0[0], q0[1] + 1);
        let r = (0..=h).map(|j| pt(r0[0] + j, r0[1] + 2 * j)).collect();
        let s = pt(3 * (m + 1) / 2, 4 * (m + 1) / 2);
        PnSet { n, p, q, r, s }
    } else {
        let h = m / 2;
        let p = pt((m + 2) / 2, 0);
        let q0 = pt((m + 2) / 2 + h, 2 * h);
        let q = (0..h).map(|i| pt(q0[0] - i, q0[1] - 2 * i)).collect();
        let r0 = pt(q0[0], q0[1] + 1);
        let r = (0..=h).map(|j| pt(r0[0] + j, r0[1] + 2 * j)).collect();
        let s = pt(3 * (m + 2) / 2, 4 * (m + 2) / 2);
        PnSet { n, p, q, r, s }
    };
    Ok(set)
}

fn poly(field: FieldSpec, terms: &[(&[i64], i64)]) -> SemigroupPolynomial {
    SemigroupPolynomial::from_int_terms(field, terms)
}

fn binom(field: FieldSpec, x: i64, y: i64) -> SemigroupPolynomial {
    SemigroupPolynomial::binomial_minus_one(field, &pt(x, y))
}

/// `g_1 = u³v⁴ + u − 4uv + 2`.
pub fn g1(field: FieldSpec) -> SemigroupPolynomial {
    poly(field, &[(&[3, 4], 1), (&[1, 0], 1), (&[1, 1], -4), (&[0, 0], 2)])
}

/// `g_n = g_1^{(n+1)/2}` for odd `n`.
pub fn gn(n: usize, field: FieldSpec) -> Result<SemigroupPolynomial> {
    if n.is_multiple_of(2) {
        return Err(Error::ParityError(format!("g_n needs odd n, got {n}")));
    }
    Ok(g1(field).pow(n.div_ceil(2) as u32))
}

/// `h_n` for even `n ≥ 2`.
pub fn hn(n: usize, field: FieldSpec) -> Result<SemigroupPolynomial> {
    if n % 2 == 1 || n == 0 {
        return Err(Error::ParityError(format!("h_n needs even n ≥ 2, got {n}")));
    }
    let h2 = poly(
        field,
        &[
            (&[2, 0], 1),
            (&[2, 1], -4),
            (&[3, 4], -1),
            (&[2, 2], 6),
            (&[1, 0], 1),
            (&[1, 1], -4),
            (&[0, 0], 1),
        ],
    );
    let g = g1(field);
    let uv4 = binom(field, 1, 1).pow(4);
    let mut hs = vec![h2];
    if n >= 4 {
        let h4 = &(&g * &hs[0]) - &(&binom(field, 1, 0) * &uv4);
        hs.push(h4);
    }
    for k in 3..=n / 2 {
        let next = &(&g * &hs[k - 2]) - &(&uv4 * &hs[k - 3]);
        hs.push(next);
    }
    Ok(hs.pop().expect("n ≥ 2"))
}

/// The family `G_n` built by the odd/even recursion.
pub fn gn_family(n: usize, field: FieldSpec) -> Result<Vec<SemigroupPolynomial>> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let u1 = binom(field, 1, 0);
    let s1 = binom(field, 3, 4);
    let uv = binom(field, 1, 1);
    let mut family = vec![g1(field), uv.pow(2), &u1 * &uv, u1.pow(2)];
    for k in 2..=n {
        let (removed, added) = if k == 2 {
            (u1.pow(2), vec![hn(2, field)?, &s1 * &g1(field)])
        } else if k % 2 == 1 {
            (&s1 * &gn(k - 2, field)?, vec![&u1 * &hn(k - 1, field)?, gn(k, field)?])
        } else {
            (&u1 * &hn(k - 2, field)?, vec![hn(k, field)?, &s1 * &gn(k - 1, field)?])
        };
        let before = family.len();
        family.retain(|f| *f != removed);
        if family.len() + 1 != before {
            return Err(Error::InvariantViolation(format!(
                "G_{} does not contain the element to drop",
                k - 1
            )));
        }
        family = family.iter().map(|f| &uv * f).collect();
        family.extend(added);
    }
    Ok(family)
}

/// One named check of the pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: Value,
}

/// All checks for one `(n, p)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct A3Report {
    pub n: usize,
    pub p: u64,
    pub checks: Vec<Check>,
}

impl A3Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// `l_n`, the second ray of the blowup cell.
pub fn blowup_ray(n: usize) -> Vec<i64> {
    let m = n as i64;
    if n % 2 == 1 {
        vec![2 * m - 2, -m + 2]
    } else {
        vec![2 * m, -m + 1]
    }
}

fn exps(v: &[Exponent]) -> Vec<Vec<i64>> {
    v.iter().map(|e| e.to_vec()).collect()
}

/// Locates the first element, and inside it the first exponent, where two
/// bases differ.
fn first_divergence(expected: &MarkedBasis, got: &MarkedBasis) -> Value {
    let exp_json = |e: &MarkedBasis, i: usize| {
        e.elements()
            .get(i)
            .map(|m| json!({"mark": m.mark.to_vec(), "poly": m.poly.to_string()}))
            .unwrap_or(Value::Null)
    };
    let len = expected.len().max(got.len());
    for i in 0..len {
        let (a, b) = (expected.elements().get(i), got.elements().get(i));
        match (a, b) {
            (Some(a), Some(b)) if a == b => continue,
            (Some(a), Some(b)) => {
                let mut support: Vec<&Exponent> = a.poly.support().chain(b.poly.support()).collect();
                support.sort_by(|x, y| expected.order().compare(y, x));
                support.dedup();
                let at = support
                    .into_iter()
                    .find(|e| a.poly.coeff(e) != b.poly.coeff(e))
                    .map(|e| {
                        json!({
                            "exp": e.to_vec(),
                            "expected": a.poly.coeff(e).to_string(),
                            "got": b.poly.coeff(e).to_string(),
                        })
                    });
                return json!({
                    "index": i,
                    "expected": exp_json(expected, i),
                    "got": exp_json(got, i),
                    "coefficient": at,
                });
            }
            _ => {
                return json!({
                    "index": i,
                    "expected": exp_json(expected, i),
                    "got": exp_json(got, i),
                })
            }
        }
    }
    Value::Null
}

fn field_of(p: u64) -> Result<FieldSpec> {
    if p == 0 {
        Ok(FieldSpec::RATIONALS)
    } else {
        FieldSpec::new(p)
    }
}

fn check(name: &str, pass: bool, detail: Value) -> Check {
    Check {
        name: name.to_string(),
        pass,
        detail,
    }
}

/// Runs the eight checks for `J_n` over `ℚ` (`p = 0`) or `𝔽_p`.
pub fn a3_verify(n: usize, p: u64) -> Result<A3Report> {
    let field = field_of(p)?;
    let s = a3_semigroup();
    let sigma = a3_cone();
    let order = a3_order();
    let basis = buchberger(&build_jn(&s, n, field), &order)?;
    let rational = if p == 0 {
        basis.clone()
    } else {
        buchberger(&build_jn(&s, n, FieldSpec::RATIONALS), &order)?
    };
    let mut checks = Vec::new();

    let pn = pn_set(n)?;
    let mut expected = pn.points();
    expected.sort();
    let mut marks = basis.marks();
    marks.sort();
    checks.push(check(
        "leading_monomials",
        marks == expected,
        json!({"marks": exps(&marks), "expected": exps(&expected)}),
    ));

    let offending = rational
        .elements()
        .iter()
        .find(|e| !e.poly.is_integral())
        .map(|e| json!({"mark": e.mark.to_vec(), "poly": e.poly.to_string()}));
    checks.push(check(
        "integral_coefficients",
        offending.is_none(),
        json!({"offending": offending}),
    ));

    let dim = staircase_dimension(&basis.marks(), &s)?;
    let want = ((n + 1) * (n + 2) / 2) as u64;
    checks.push(check(
        "staircase_dimension",
        dim == Staircase::Finite(want),
        json!({"dimension": dim, "expected": want}),
    ));

    if p == 0 {
        checks.push(check("mod_p_image", true, json!({"applicable": false})));
    } else {
        let image = rational.reduce_mod(p)?;
        let same = image.to_json() == basis.to_json();
        let detail = if same {
            json!({"applicable": true})
        } else {
            json!({"applicable": true, "divergence": first_divergence(&image, &basis)})
        };
        checks.push(check("mod_p_image", same, detail));
    }

    let want_rays = [vec![2, -1], blowup_ray(n)];
    let rays = cone_of_basis(&basis, &sigma);
    let rays_ok = matches!(&rays, Ok(r) if *r == want_rays);
    checks.push(check(
        "cell_rays",
        rays_ok,
        json!({
            "rays": rays.as_ref().ok(),
            "expected": want_rays,
            "error": rays.as_ref().err().map(|e| e.to_string()),
        }),
    ));

    let det = rays.as_ref().ok().map(|r| det2(&r[0], &r[1]).abs());
    checks.push(check(
        "non_regular_cell",
        det == Some(2),
        json!({"abs_determinant": det}),
    ));

    let family = gn_family(n, field)?;
    let from_family = interreduce(&family, &order, &s)?;
    let same = from_family == basis;
    let detail = if same {
        json!({"family_size": family.len()})
    } else {
        json!({"family_size": family.len(), "divergence": first_divergence(&basis, &from_family)})
    };
    checks.push(check("family_interreduces_to_basis", same, detail));

    let nonmember = non_membership_suite(&s, n, field)?;
    checks.push(check("non_membership", nonmember, json!({"max_power": n})));

    Ok(A3Report { n, p, checks })
}

/// Reports for every `1 ≤ n ≤ nmax` and every `p` in `primes`, in that
/// order, computed on `jobs` worker threads.
pub fn a3_run(nmax: usize, primes: &[u64], jobs: usize) -> Result<Vec<A3Report>> {
    for &p in primes {
        field_of(p)?;
    }
    let tasks: Vec<(usize, u64)> = (1..=nmax)
        .flat_map(|n| primes.iter().map(move |&p| (n, p)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    pool.install(|| tasks.par_iter().map(|&(n, p)| a3_verify(n, p)).collect())
}
