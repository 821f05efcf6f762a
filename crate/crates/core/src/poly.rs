//! Polynomials in a semigroup algebra `𝕂[S]`, matrix term orders with weight
//! refinements, leading data, initial forms and Gröbner degenerations.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::coeff::{Coeff, FieldSpec};
use crate::error::{Error, Result};
use crate::lattice::{dot, rank};
use crate::semigroup::{AffineSemigroup, Exponent};

/// Comparison key of an exponent: its images under the effective order rows.
pub type OrderKey = SmallVec<[i64; 4]>;

/// A monomial order on `S`: weight rows compared first, then the rows of an
/// invertible integer base matrix, lexicographically.
///
/// Rows lying in the span of earlier rows never break a tie, so only the
/// first `d` independent rows are kept for comparisons. Rational weight rows
/// are scaled by the lcm of their denominators, which preserves every
/// comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "OrderRepr", into = "OrderRepr")]
pub struct TermOrder {
    weights: Vec<Vec<BigRational>>,
    base: Vec<Vec<i64>>,
    rows: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct OrderRepr {
    #[serde(default)]
    weights: Vec<Vec<String>>,
    base: Vec<Vec<i64>>,
}

impl TryFrom<OrderRepr> for TermOrder {
    type Error = Error;

    fn try_from(r: OrderRepr) -> Result<Self> {
        let weights = r
            .weights
            .iter()
            .map(|row| row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        TermOrder::unchecked(weights, r.base)
    }
}

impl From<TermOrder> for OrderRepr {
    fn from(o: TermOrder) -> Self {
        OrderRepr {
            weights: o
                .weights
                .iter()
                .map(|row| row.iter().map(rational_string).collect())
                .collect(),
            base: o.base,
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    match FieldSpec::RATIONALS.parse(s)? {
        Coeff::Rational(q) => Ok(q),
        Coeff::Modular { .. } => unreachable!("rational field parses to rationals"),
    }
}

fn rational_string(q: &BigRational) -> String {
    Coeff::Rational(q.clone()).to_string()
}

/// Integer weight vector as rationals.
pub fn int_weight(w: &[i64]) -> Vec<BigRational> {
    w.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
}

fn scaled_row(row: &[BigRational]) -> Vec<i64> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter()
        .map(|q| {
            let v = q.numer() * (&lcm / q.denom());
            i64::try_from(v).expect("weight entry fits in i64")
        })
        .collect()
}

impl TermOrder {
    /// Builds an order and checks it is a monomial order on `s`: every
    /// generator must compare strictly greater than 0.
    pub fn new(weights: Vec<Vec<BigRational>>, base: Vec<Vec<i64>>, s: &AffineSemigroup) -> Result<Self> {
        let order = TermOrder::unchecked(weights, base)?;
        order.check_positive(s)?;
        Ok(order)
    }

    /// Matrix order without weight rows.
    pub fn matrix(base: Vec<Vec<i64>>, s: &AffineSemigroup) -> Result<Self> {
        TermOrder::new(Vec::new(), base, s)
    }

    /// The order `≺` of the `A_3` surface, with rows `(2,−1)` and `(1,1)`.
    pub fn a3_base() -> Vec<Vec<i64>> {
        vec![vec![2, -1], vec![1, 1]]
    }

    /// A default base order for `s`: the `A_3` matrix when it is a monomial
    /// order on `s`; otherwise an interior vector of `σ` followed by its
    /// perpendicular (identity rows in dimension other than 2).
    pub fn default_for(s: &AffineSemigroup) -> Result<Self> {
        if s.dim() == 2 {
            if let Ok(o) = TermOrder::matrix(TermOrder::a3_base(), s) {
                return Ok(o);
            }
        }
        let d = s.dim();
        let mut interior = vec![0i64; d];
        for n in s.facet_normals() {
            for (acc, x) in interior.iter_mut().zip(n) {
                *acc += x;
            }
        }
        let interior = crate::lattice::primitive(&interior);
        let mut base = vec![interior.clone()];
        if d == 2 {
            base.push(vec![-interior[1], interior[0]]);
        } else {
            for i in 0..d {
                let mut e = vec![0; d];
                e[i] = 1;
                let mut trial = base.clone();
                trial.push(e.clone());
                if rank(&trial) == trial.len() {
                    base.push(e);
                }
                if base.len() == d {
                    break;
                }
            }
        }
        TermOrder::matrix(base, s)
    }

    fn unchecked(weights: Vec<Vec<BigRational>>, base: Vec<Vec<i64>>) -> Result<Self> {
        let d = base.len();
        if d == 0 || base.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidOrder("base matrix must be square".into()));
        }
        if rank(&base) != d {
            return Err(Error::InvalidOrder("base matrix is singular".into()));
        }
        if let Some(w) = weights.iter().find(|w| w.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: w.len(),
            });
        }
        let mut rows: Vec<Vec<i64>> = Vec::with_capacity(d);
        let candidates = weights.iter().map(|w| scaled_row(w)).chain(base.iter().cloned());
        for row in candidates {
            if rows.len() == d {
                break;
            }
            let mut trial = rows.clone();
            trial.push(row.clone());
            if rank(&trial) == trial.len() {
                rows.push(row);
            }
        }
        Ok(TermOrder { weights, base, rows })
    }

    /// Positivity certificate: each generator has a lexicographically
    /// positive comparison vector. Lex-positive vectors are closed under
    /// addition, so every nonzero element of `S` is then `≻ 0`.
    pub fn check_positive(&self, s: &AffineSemigroup) -> Result<()> {
        if s.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: s.dim(),
                got: self.dim(),
            });
        }
        for g in s.generators() {
            let k = self.key(g);
            match k.iter().find(|&&x| x != 0) {
                Some(&x) if x > 0 => {}
                _ => {
                    return Err(Error::InvalidOrder(format!(
                        "generator {g:?} is not greater than 1"
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn weights(&self) -> &[Vec<BigRational>] {
        &self.weights
    }

    pub fn base(&self) -> &[Vec<i64>] {
        &self.base
    }

    /// Pushes `w` on top of the weight stack: the refined order `>_w`.
    pub fn refined(&self, w: &[BigRational]) -> Result<Self> {
        let mut weights = vec![w.to_vec()];
        weights.extend(self.weights.iter().cloned());
        TermOrder::unchecked(weights, self.base.clone())
    }

    /// Like [`TermOrder::refined`] for an integer weight.
    pub fn refined_int(&self, w: &[i64]) -> Result<Self> {
        self.refined(&int_weight(w))
    }

    /// Replaces the weight stack.
    pub fn with_weights(&self, weights: Vec<Vec<BigRational>>) -> Result<Self> {
        TermOrder::unchecked(weights, self.base.clone())
    }

    pub fn key(&self, u: &[i64]) -> OrderKey {
        self.rows.iter().map(|r| dot(r, u)).collect()
    }

    pub fn compare(&self, u: &[i64], v: &[i64]) -> Ordering {
        for r in &self.rows {
            match dot(r, u).cmp(&dot(r, v)) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    }
}

/// A finite `𝕂`-linear combination of semigroup monomials `x^u`.
///
/// Terms are kept in a map ordered lexicographically by exponent, which makes
/// iteration and serialization deterministic; zero coefficients are never
/// stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SemigroupPolynomial {
    field: FieldSpec,
    dim: usize,
    terms: BTreeMap<Exponent, Coeff>,
}

impl SemigroupPolynomial {
    pub fn zero(field: FieldSpec, dim: usize) -> Self {
        SemigroupPolynomial {
            field,
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: FieldSpec, dim: usize, c: Coeff) -> Self {
        Self::monomial(Exponent::zero(dim), c).with_field(field)
    }

    pub fn one(field: FieldSpec, dim: usize) -> Self {
        Self::constant(field, dim, field.one())
    }

    pub fn monomial(exp: Exponent, c: Coeff) -> Self {
        let field = c.field();
        let dim = exp.dim();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        SemigroupPolynomial { field, dim, terms }
    }

    fn with_field(mut self, field: FieldSpec) -> Self {
        self.field = field;
        self
    }

    /// Collects terms, adding repeated exponents and dropping zeros.
    pub fn from_terms<I>(field: FieldSpec, dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, Coeff)>,
    {
        let mut out = SemigroupPolynomial::zero(field, dim);
        for (e, c) in terms {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: e.dim(),
                });
            }
            if c.field() != field {
                return Err(Error::FieldMismatch {
                    left: field.characteristic(),
                    right: c.field().characteristic(),
                });
            }
            out.add_term(e, c);
        }
        Ok(out)
    }

    /// Integer-coefficient convenience constructor.
    pub fn from_int_terms(field: FieldSpec, terms: &[(&[i64], i64)]) -> Self {
        let dim = terms.first().map_or(0, |t| t.0.len());
        let mut out = SemigroupPolynomial::zero(field, dim);
        for (e, c) in terms {
            out.add_term(Exponent::new(e), field.from_i64(*c));
        }
        out
    }

    /// `x^g − 1`.
    pub fn binomial_minus_one(field: FieldSpec, g: &Exponent) -> Self {
        let dim = g.dim();
        let mut out = SemigroupPolynomial::zero(field, dim);
        out.add_term(g.clone(), field.one());
        out.add_term(Exponent::zero(dim), -field.one());
        out
    }

    pub(crate) fn add_term(&mut self, e: Exponent, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lexicographic exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &Coeff)> + '_ {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Exponent> + '_ {
        self.terms.keys()
    }

    pub fn coeff(&self, e: &Exponent) -> Coeff {
        self.terms.get(e).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Checks every exponent against the ambient semigroup.
    pub fn check_in(&self, s: &AffineSemigroup) -> Result<()> {
        if self.dim != s.dim() {
            return Err(Error::DimensionMismatch {
                expected: s.dim(),
                got: self.dim,
            });
        }
        match self.terms.keys().find(|e| !s.contains(e)) {
            Some(e) => Err(Error::NotInSemigroup(e.to_vec())),
            None => Ok(()),
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.characteristic(),
                right: other.field.characteristic(),
            });
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let mut out = SemigroupPolynomial::zero(self.field, self.dim);
        if c.is_zero() {
            return out;
        }
        for (e, a) in &self.terms {
            out.terms.insert(e.clone(), a * c);
        }
        out
    }

    /// Multiplies by the monomial `c·x^shift`.
    pub fn shift(&self, shift: &Exponent, c: &Coeff) -> Self {
        let mut out = SemigroupPolynomial::zero(self.field, self.dim);
        if c.is_zero() {
            return out;
        }
        for (e, a) in &self.terms {
            out.terms.insert(e.add(shift), a * c);
        }
        out
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut acc = SemigroupPolynomial::one(self.field, self.dim);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Leading exponent and coefficient under `order`.
    pub fn leading(&self, order: &TermOrder) -> Result<(Exponent, Coeff)> {
        self.terms
            .iter()
            .max_by(|a, b| order.compare(a.0, b.0))
            .map(|(e, c)| (e.clone(), c.clone()))
            .ok_or(Error::ZeroPolynomial)
    }

    /// Terms sorted by `order`, largest first.
    pub fn sorted_terms(&self, order: &TermOrder) -> Vec<(&Exponent, &Coeff)> {
        let mut v: Vec<(&Exponent, &Coeff)> = self.terms.iter().collect();
        v.sort_by(|a, b| order.compare(b.0, a.0));
        v
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self, order: &TermOrder) -> Result<Self> {
        let (_, lc) = self.leading(order)?;
        Ok(self.scale(&lc.inv()?))
    }

    /// `d_w(f) = max { w·u : c_u ≠ 0 }`.
    pub fn weight_degree(&self, w: &[BigRational]) -> Result<BigRational> {
        self.terms
            .keys()
            .map(|u| weight_of(w, u))
            .max()
            .ok_or(Error::ZeroPolynomial)
    }

    /// Sum of the terms of maximal `w`-weight.
    pub fn initial_form(&self, w: &[BigRational]) -> Result<Self> {
        let top = self.weight_degree(w)?;
        let mut out = SemigroupPolynomial::zero(self.field, self.dim);
        for (u, c) in &self.terms {
            if weight_of(w, u) == top {
                out.terms.insert(u.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// The Gröbner degeneration `f_t = t^{d_w(f)} f(t^{−w·a₁}x^{a₁}, …)`: the
    /// term `x^u` acquires the factor `t^{d_w(f) − w·u}`.
    pub fn degeneration(&self, w: &[BigRational]) -> Result<Degeneration> {
        let top = self.weight_degree(w)?;
        let mut layers: BTreeMap<u64, SemigroupPolynomial> = BTreeMap::new();
        for (u, c) in &self.terms {
            let gap = &top - weight_of(w, u);
            if !gap.is_integer() {
                return Err(Error::NonIntegralWeight(format!("{w:?}")));
            }
            let k = u64::try_from(gap.to_integer()).expect("gap is nonnegative");
            layers
                .entry(k)
                .or_insert_with(|| SemigroupPolynomial::zero(self.field, self.dim))
                .terms
                .insert(u.clone(), c.clone());
        }
        Ok(Degeneration {
            field: self.field,
            dim: self.dim,
            layers,
        })
    }

    /// Coefficient-wise image in `𝔽_p`.
    pub fn reduce_mod(&self, p: u64) -> Result<Self> {
        let field = FieldSpec::new(p)?;
        let mut out = SemigroupPolynomial::zero(field, self.dim);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.reduce_mod(p)?);
        }
        Ok(out)
    }

    /// True when all coefficients are integers (always true over `𝔽_p`).
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(Coeff::is_integral)
    }

    /// Renders terms in the given order using variable names for the
    /// coordinates, e.g. `u3v4 + u - 4uv + 2`.
    pub fn render(&self, order: Option<&TermOrder>, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let terms: Vec<(&Exponent, &Coeff)> = match order {
            Some(o) => self.sorted_terms(o),
            None => self.terms.iter().rev().collect(),
        };
        let mut out = String::new();
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = if negative { -c } else { c.clone() };
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono = render_monomial(e, names);
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&abs.to_string());
                }
                out.push_str(&mono);
            }
        }
        out
    }
}

fn render_monomial(e: &Exponent, names: &[&str]) -> String {
    let mut s = String::new();
    for (i, &x) in e.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let name = names.get(i).map(|n| n.to_string()).unwrap_or_else(|| format!("x{}", i + 1));
        s.push_str(&name);
        if x < 0 {
            s.push_str(&format!("^{x}"));
        } else if x != 1 {
            s.push_str(&x.to_string());
        }
    }
    s
}

/// Default coordinate names: `u, v` in dimension 2, `x1, x2, …` otherwise.
pub fn default_names(dim: usize) -> Vec<String> {
    if dim == 2 {
        vec!["u".into(), "v".into()]
    } else {
        (1..=dim).map(|i| format!("x{i}")).collect()
    }
}

impl fmt::Display for SemigroupPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.dim);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        write!(f, "{}", self.render(None, &refs))
    }
}

pub fn weight_of(w: &[BigRational], u: &[i64]) -> BigRational {
    w.iter()
        .zip(u)
        .map(|(a, &b)| a * BigInt::from(b))
        .fold(BigRational::zero(), |acc, x| acc + x)
}

impl Add for &SemigroupPolynomial {
    type Output = SemigroupPolynomial;

    fn add(self, rhs: &SemigroupPolynomial) -> SemigroupPolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SemigroupPolynomial {
    type Output = SemigroupPolynomial;

    fn sub(self, rhs: &SemigroupPolynomial) -> SemigroupPolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Neg for &SemigroupPolynomial {
    type Output = SemigroupPolynomial;

    fn neg(self) -> SemigroupPolynomial {
        self.scale(&-self.field.one())
    }
}

impl Mul for &SemigroupPolynomial {
    type Output = SemigroupPolynomial;

    fn mul(self, rhs: &SemigroupPolynomial) -> SemigroupPolynomial {
        assert_eq!(self.field, rhs.field, "polynomial field mismatch");
        let mut out = SemigroupPolynomial::zero(self.field, self.dim);
        for (e, a) in &self.terms {
            for (f, b) in &rhs.terms {
                out.add_term(e.add(f), a * b);
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    field: FieldSpec,
    terms: Vec<TermRepr>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<i64>,
    coeff: String,
}

impl SemigroupPolynomial {
    fn to_repr(&self, order: Option<&TermOrder>) -> PolyRepr {
        let terms: Vec<(&Exponent, &Coeff)> = match order {
            Some(o) => self.sorted_terms(o),
            None => self.terms.iter().rev().collect(),
        };
        PolyRepr {
            field: self.field,
            terms: terms
                .into_iter()
                .map(|(e, c)| TermRepr {
                    exp: e.to_vec(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
    }

    /// JSON value with terms listed in descending `order`.
    pub fn to_json_ordered(&self, order: &TermOrder) -> serde_json::Value {
        serde_json::to_value(self.to_repr(Some(order))).expect("polynomial serializes")
    }
}

impl Serialize for SemigroupPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_repr(None).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SemigroupPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PolyRepr::deserialize(d)?;
        let dim = r.terms.first().map_or(0, |t| t.exp.len());
        let terms = r
            .terms
            .into_iter()
            .map(|t| Ok((Exponent::from(t.exp), r.field.parse(&t.coeff)?)))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        SemigroupPolynomial::from_terms(r.field, dim, terms).map_err(serde::de::Error::custom)
    }
}

/// A polynomial together with a marked support exponent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MarkedPoly {
    pub poly: SemigroupPolynomial,
    pub mark: Exponent,
}

impl MarkedPoly {
    pub fn new(poly: SemigroupPolynomial, mark: Exponent) -> Result<Self> {
        if poly.coeff(&mark).is_zero() {
            return Err(Error::InvalidInput(format!("mark {mark:?} is not in the support")));
        }
        Ok(MarkedPoly { poly, mark })
    }

    /// Marks the polynomial with its leading exponent under `order`.
    pub fn leading(poly: SemigroupPolynomial, order: &TermOrder) -> Result<Self> {
        let (mark, _) = poly.leading(order)?;
        Ok(MarkedPoly { poly, mark })
    }
}

/// `f_t` as a polynomial in `t` whose coefficients are semigroup polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Degeneration {
    field: FieldSpec,
    dim: usize,
    layers: BTreeMap<u64, SemigroupPolynomial>,
}

impl Degeneration {
    /// Coefficient of `t^k`.
    pub fn layer(&self, k: u64) -> SemigroupPolynomial {
        self.layers
            .get(&k)
            .cloned()
            .unwrap_or_else(|| SemigroupPolynomial::zero(self.field, self.dim))
    }

    pub fn layers(&self) -> impl Iterator<Item = (u64, &SemigroupPolynomial)> + '_ {
        self.layers.iter().map(|(k, p)| (*k, p))
    }

    /// Evaluates at `t = c`.
    pub fn eval(&self, c: &Coeff) -> SemigroupPolynomial {
        let mut out = SemigroupPolynomial::zero(self.field, self.dim);
        for (k, p) in &self.layers {
            out = &out + &p.scale(&c.pow(*k));
        }
        out
    }

    pub fn at_one(&self) -> SemigroupPolynomial {
        self.eval(&self.field.one())
    }

    pub fn at_zero(&self) -> SemigroupPolynomial {
        self.layer(0)
    }

    /// Exponent of `t` attached to each term, keyed by semigroup exponent.
    pub fn t_powers(&self) -> BTreeMap<Exponent, u64> {
        let mut out = BTreeMap::new();
        for (k, p) in &self.layers {
            for e in p.support() {
                out.insert(e.clone(), *k);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::{dual_generators, Cone};
    use proptest::prelude::*;

    fn a3() -> AffineSemigroup {
        dual_generators(&Cone::new(vec![vec![0, 1], vec![4, -3]]).unwrap()).unwrap()
    }

    fn q() -> FieldSpec {
        FieldSpec::RATIONALS
    }

    fn g1(field: FieldSpec) -> SemigroupPolynomial {
        SemigroupPolynomial::from_int_terms(
            field,
            &[(&[3, 4], 1), (&[1, 0], 1), (&[1, 1], -4), (&[0, 0], 2)],
        )
    }

    fn e(v: [i64; 2]) -> Exponent {
        Exponent::from(v)
    }

    #[test]
    fn compare_examples() {
        let s = a3();
        let o = TermOrder::matrix(TermOrder::a3_base(), &s).unwrap();
        assert_eq!(o.compare(&[3, 4], &[1, 0]), Ordering::Greater);
        let stacked = o.refined_int(&[1, 1]).unwrap();
        assert_eq!(stacked.compare(&[2, 0], &[1, 1]), Ordering::Greater);
        assert_eq!(o.compare(&[2, 2], &[2, 2]), Ordering::Equal);
    }

    #[test]
    fn leading_examples() {
        let s = a3();
        let o = TermOrder::matrix(TermOrder::a3_base(), &s).unwrap();
        assert_eq!(g1(q()).leading(&o).unwrap(), (e([3, 4]), q().one()));
        let two = SemigroupPolynomial::constant(q(), 2, q().from_i64(2));
        assert_eq!(two.leading(&o).unwrap(), (e([0, 0]), q().from_i64(2)));
        let u1 = SemigroupPolynomial::binomial_minus_one(q(), &e([1, 0]));
        assert_eq!(u1.pow(2).leading(&o).unwrap(), (e([2, 0]), q().one()));
        assert_eq!(
            SemigroupPolynomial::zero(q(), 2).leading(&o),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn arithmetic_examples() {
        let u1 = SemigroupPolynomial::binomial_minus_one(q(), &e([1, 0]));
        let uv1 = SemigroupPolynomial::binomial_minus_one(q(), &e([1, 1]));
        let prod = &u1 * &uv1;
        let expected = SemigroupPolynomial::from_int_terms(
            q(),
            &[(&[2, 1], 1), (&[1, 0], -1), (&[1, 1], -1), (&[0, 0], 1)],
        );
        assert_eq!(prod, expected);
        assert_eq!(&g1(q()) * &SemigroupPolynomial::one(q(), 2), g1(q()));

        let f2 = FieldSpec::new(2).unwrap();
        let sq = g1(f2).pow(2);
        let expected = SemigroupPolynomial::from_int_terms(f2, &[(&[6, 8], 1), (&[2, 0], 1)]);
        assert_eq!(sq, expected);

        assert!(matches!(
            g1(q()).checked_add(&g1(f2)),
            Err(Error::FieldMismatch { .. })
        ));
    }

    #[test]
    fn weight_degree_examples() {
        assert_eq!(g1(q()).weight_degree(&int_weight(&[1, 1])).unwrap(), BigRational::from_integer(7.into()));
        assert_eq!(g1(q()).weight_degree(&int_weight(&[0, 1])).unwrap(), BigRational::from_integer(4.into()));
        let m = SemigroupPolynomial::monomial(e([2, 5]), q().one());
        assert_eq!(m.weight_degree(&int_weight(&[3, -1])).unwrap(), BigRational::from_integer(1.into()));
    }

    #[test]
    fn degeneration_examples() {
        let d = g1(q()).degeneration(&int_weight(&[1, 1])).unwrap();
        let powers = d.t_powers();
        assert_eq!(powers[&e([3, 4])], 0);
        assert_eq!(powers[&e([1, 0])], 6);
        assert_eq!(powers[&e([1, 1])], 5);
        assert_eq!(powers[&e([0, 0])], 7);
        assert_eq!(d.at_one(), g1(q()));
        assert_eq!(d.at_zero(), SemigroupPolynomial::monomial(e([3, 4]), q().one()));

        let half = vec![BigRational::new(1.into(), 2.into()), BigRational::zero()];
        assert!(matches!(
            g1(q()).degeneration(&half),
            Err(Error::NonIntegralWeight(_))
        ));
    }

    #[test]
    fn initial_form_examples() {
        let inw = g1(q()).initial_form(&int_weight(&[2, -1])).unwrap();
        let expected = SemigroupPolynomial::from_int_terms(q(), &[(&[3, 4], 1), (&[1, 0], 1)]);
        assert_eq!(inw, expected);
        let m = SemigroupPolynomial::monomial(e([1, 1]), q().from_i64(3));
        assert_eq!(m.initial_form(&int_weight(&[5, 7])).unwrap(), m);
        assert_eq!(
            g1(q()).initial_form(&int_weight(&[0, 1])).unwrap(),
            SemigroupPolynomial::monomial(e([3, 4]), q().one())
        );
    }

    #[test]
    fn orders_failing_positivity_are_rejected() {
        let s = a3();
        // (−1, 0) makes every generator smaller than 1
        assert!(matches!(
            TermOrder::matrix(vec![vec![-1, 0], vec![0, 1]], &s),
            Err(Error::InvalidOrder(_))
        ));
        assert!(TermOrder::matrix(vec![vec![1, 1], vec![2, 2]], &s).is_err());
        let default = TermOrder::default_for(&s).unwrap();
        assert_eq!(default.base(), TermOrder::a3_base().as_slice());

        // σ̌ containing (0,1): the A_3 matrix gives (0,1) ↦ −1, fallback kicks in
        let n2 = dual_generators(&Cone::new(vec![vec![1, 0], vec![0, 1]]).unwrap()).unwrap();
        assert!(TermOrder::matrix(TermOrder::a3_base(), &n2).is_err());
        assert!(TermOrder::default_for(&n2).is_ok());
    }

    #[test]
    fn render_and_json() {
        let s = a3();
        let o = TermOrder::matrix(TermOrder::a3_base(), &s).unwrap();
        assert_eq!(g1(q()).render(Some(&o), &["u", "v"]), "u3v4 + u - 4uv + 2");
        let json = serde_json::to_string(&g1(q())).unwrap();
        let back: SemigroupPolynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g1(q()));
        let ordered = g1(q()).to_json_ordered(&o);
        assert_eq!(ordered["terms"][0]["exp"], serde_json::json!([3, 4]));
        assert_eq!(ordered["terms"][2]["coeff"], "-4");

        let json = serde_json::to_string(&o.refined(&[BigRational::new(1.into(), 2.into()), BigRational::one()]).unwrap()).unwrap();
        assert_eq!(json, r#"{"weights":[["1/2","1"]],"base":[[2,-1],[1,1]]}"#);
        let back: TermOrder = serde_json::from_str(&json).unwrap();
        assert_eq!(back.compare(&[1, 0], &[0, 1]), Ordering::Less);
    }

    fn arb_poly() -> impl Strategy<Value = SemigroupPolynomial> {
        // exponents drawn from nonnegative combinations of the A_3 generators
        proptest::collection::vec(((0i64..4, 0i64..3, 0i64..4), -5i64..6), 1..8).prop_map(|terms| {
            let mut p = SemigroupPolynomial::zero(FieldSpec::RATIONALS, 2);
            for ((a, b, c), k) in terms {
                let exp = Exponent::from([a + 3 * b + c, 4 * b + c]);
                p.add_term(exp, FieldSpec::RATIONALS.from_i64(k));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn degeneration_interpolates(f in arb_poly(), w0 in 0i64..6, w1 in 0i64..6) {
            prop_assume!(!f.is_zero());
            // w = w0·(4,−3) + w1·(0,1) ∈ σ
            let w = int_weight(&[4 * w0, w1 - 3 * w0]);
            let d = f.degeneration(&w).unwrap();
            prop_assert_eq!(d.at_one(), f.clone());
            prop_assert_eq!(d.at_zero(), f.initial_form(&w).unwrap());
        }

        #[test]
        fn leading_is_multiplicative(f in arb_poly(), g in arb_poly()) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            let s = a3();
            let o = TermOrder::matrix(TermOrder::a3_base(), &s).unwrap();
            let (ef, cf) = f.leading(&o).unwrap();
            let (eg, cg) = g.leading(&o).unwrap();
            let (e, c) = (&f * &g).leading(&o).unwrap();
            prop_assert_eq!(e, ef.add(&eg));
            prop_assert_eq!(c, &cf * &cg);
        }

        #[test]
        fn order_is_compatible_with_addition(a in (0i64..5, 0i64..5, 0i64..5), b in (0i64..5, 0i64..5, 0i64..5), c in (0i64..5, 0i64..5, 0i64..5)) {
            let s = a3();
            let o = TermOrder::matrix(TermOrder::a3_base(), &s).unwrap().refined_int(&[1, 4]).unwrap();
            let pt = |(x, y, z): (i64, i64, i64)| Exponent::from([x + 3 * y + z, 4 * y + z]);
            let (u, v, w) = (pt(a), pt(b), pt(c));
            prop_assert_eq!(o.compare(&u, &v), o.compare(&u.add(&w), &v.add(&w)));
            prop_assert_eq!(o.compare(&u, &v) == Ordering::Equal, u == v);
            if !w.is_zero() {
                prop_assert_eq!(o.compare(&w, &Exponent::zero(2)), Ordering::Greater);
            }
        }
    }
}
