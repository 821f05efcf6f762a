//! Normal forms and Buchberger's algorithm in a two-dimensional semigroup
//! algebra, where two marks may have several minimal common multiples.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::coeff::{Coeff, FieldSpec};
use crate::error::{Error, Result};
use crate::lattice::dot;
use crate::poly::{MarkedPoly, OrderKey, SemigroupPolynomial, TermOrder};
use crate::semigroup::{AffineSemigroup, Exponent};

/// An ideal of `𝕂[S]` given by generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    field: FieldSpec,
    generators: Vec<SemigroupPolynomial>,
    ambient: AffineSemigroup,
}

impl Ideal {
    pub fn new(
        field: FieldSpec,
        generators: Vec<SemigroupPolynomial>,
        ambient: AffineSemigroup,
    ) -> Result<Self> {
        for g in &generators {
            if g.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
            if g.field() != field {
                return Err(Error::FieldMismatch {
                    left: field.characteristic(),
                    right: g.field().characteristic(),
                });
            }
            g.check_in(&ambient)?;
        }
        Ok(Ideal {
            field,
            generators,
            ambient,
        })
    }

    /// `J_n = ⟨x^{a_1} − 1, …, x^{a_s} − 1⟩^{n+1}`, generated by all products
    /// of `n + 1` binomials taken with repetition.
    pub fn augmentation_power(ambient: &AffineSemigroup, n: usize, field: FieldSpec) -> Self {
        let binomials: Vec<SemigroupPolynomial> = ambient
            .generators()
            .iter()
            .map(|g| SemigroupPolynomial::binomial_minus_one(field, g))
            .collect();
        let mut generators = Vec::new();
        let mut idx = vec![0usize; n + 1];
        // nondecreasing index tuples enumerate multisets
        loop {
            let mut prod = SemigroupPolynomial::one(field, ambient.dim());
            for &i in &idx {
                prod = &prod * &binomials[i];
            }
            generators.push(prod);
            let Some(pos) = (0..=n).rev().find(|&k| idx[k] + 1 < binomials.len()) else {
                break;
            };
            let next = idx[pos] + 1;
            for slot in &mut idx[pos..] {
                *slot = next;
            }
        }
        Ideal {
            field,
            generators,
            ambient: ambient.clone(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn generators(&self) -> &[SemigroupPolynomial] {
        &self.generators
    }

    pub fn ambient(&self) -> &AffineSemigroup {
        &self.ambient
    }

    /// Same generators listed in reverse.
    pub fn reversed(&self) -> Self {
        let mut out = self.clone();
        out.generators.reverse();
        out
    }
}

/// A list of marked polynomials attached to a term order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedBasis {
    order: TermOrder,
    elements: Vec<MarkedPoly>,
    reduced: bool,
    ambient: AffineSemigroup,
}

impl MarkedBasis {
    /// Wraps elements as a basis, checking that each mark leads its
    /// polynomial. `reduced` is recomputed from the data.
    pub fn new(order: TermOrder, elements: Vec<MarkedPoly>, ambient: AffineSemigroup) -> Result<Self> {
        for e in &elements {
            e.poly.check_in(&ambient)?;
            let (lead, _) = e.poly.leading(&order)?;
            if lead != e.mark {
                return Err(Error::InvalidInput(format!(
                    "mark {:?} is not the leading exponent {:?}",
                    e.mark, lead
                )));
            }
        }
        let mut b = MarkedBasis {
            order,
            elements,
            reduced: false,
            ambient,
        };
        b.sort();
        b.reduced = b.check_reduced();
        Ok(b)
    }

    fn sort(&mut self) {
        let order = self.order.clone();
        self.elements.sort_by(|a, b| order.compare(&b.mark, &a.mark));
    }

    fn check_reduced(&self) -> bool {
        let s = &self.ambient;
        self.elements.iter().enumerate().all(|(i, e)| {
            e.poly.coeff(&e.mark).is_one()
                && self.elements.iter().enumerate().all(|(j, other)| {
                    i == j
                        || (other.mark != e.mark
                            && e.poly.support().all(|u| !s.divides(&other.mark, u)))
                })
        })
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn elements(&self) -> &[MarkedPoly] {
        &self.elements
    }

    pub fn reduced(&self) -> bool {
        self.reduced
    }

    pub fn ambient(&self) -> &AffineSemigroup {
        &self.ambient
    }

    pub fn field(&self) -> Option<FieldSpec> {
        self.elements.first().map(|e| e.poly.field())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Marks in basis order, largest first.
    pub fn marks(&self) -> Vec<Exponent> {
        self.elements.iter().map(|e| e.mark.clone()).collect()
    }

    pub fn mark_set(&self) -> BTreeSet<Exponent> {
        self.elements.iter().map(|e| e.mark.clone()).collect()
    }

    pub fn polys(&self) -> Vec<&SemigroupPolynomial> {
        self.elements.iter().map(|e| &e.poly).collect()
    }

    /// Coefficient-wise image modulo `p`, re-marked under the same order.
    pub fn reduce_mod(&self, p: u64) -> Result<Self> {
        let elements = self
            .elements
            .iter()
            .map(|e| {
                Ok(MarkedPoly {
                    poly: e.poly.reduce_mod(p)?,
                    mark: e.mark.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        MarkedBasis::new(self.order.clone(), elements, self.ambient.clone())
    }

    /// The remainder of `f` on division by the basis.
    pub fn normal_form(&self, f: &SemigroupPolynomial) -> Result<SemigroupPolynomial> {
        if f.is_zero() {
            return Ok(f.clone());
        }
        if let Some(field) = self.field() {
            if field != f.field() {
                return Err(Error::FieldMismatch {
                    left: field.characteristic(),
                    right: f.field().characteristic(),
                });
            }
        }
        let ctx = Ctx::new(&self.ambient, &self.order);
        let elems: Vec<Elem> = self
            .elements
            .iter()
            .map(|e| ctx.elem(&e.poly, &e.mark))
            .collect();
        let r = ctx.reduce(ctx.lift(f), &elems);
        Ok(ctx.lower(&r, f.field()))
    }

    /// Checks that every S-polynomial at every minimal common multiple of a
    /// pair of marks reduces to zero.
    pub fn spairs_reduce_to_zero(&self) -> Result<bool> {
        let ctx = Ctx::new(&self.ambient, &self.order);
        let elems: Vec<Elem> = self
            .elements
            .iter()
            .map(|e| ctx.elem(&e.poly, &e.mark))
            .collect();
        for i in 0..elems.len() {
            for j in i + 1..elems.len() {
                for m in self.ambient.min_common_multiples(&elems[i].mark, &elems[j].mark)? {
                    let sp = ctx.spoly(&elems[i], &elems[j], &m);
                    if !ctx.reduce(sp, &elems).is_empty() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> Value {
        let elements: Vec<Value> = self
            .elements
            .iter()
            .map(|e| {
                serde_json::json!({
                    "mark": e.mark.to_vec(),
                    "poly": e.poly.to_json_ordered(&self.order),
                })
            })
            .collect();
        serde_json::json!({
            "order": serde_json::to_value(&self.order).expect("order serializes"),
            "reduced": self.reduced,
            "elements": elements,
        })
    }

    /// Parses the JSON layout produced by [`MarkedBasis::to_json`].
    pub fn from_json(v: &Value, ambient: &AffineSemigroup) -> Result<Self> {
        #[derive(Deserialize)]
        struct ElemRepr {
            mark: Vec<i64>,
            poly: SemigroupPolynomial,
        }
        #[derive(Deserialize)]
        struct Repr {
            order: TermOrder,
            elements: Vec<ElemRepr>,
        }
        let r: Repr =
            serde_json::from_value(v.clone()).map_err(|e| Error::InvalidInput(e.to_string()))?;
        r.order.check_positive(ambient)?;
        let elements = r
            .elements
            .into_iter()
            .map(|e| MarkedPoly::new(e.poly, Exponent::from(e.mark)))
            .collect::<Result<Vec<_>>>()?;
        MarkedBasis::new(r.order, elements, ambient.clone())
    }
}

impl Serialize for MarkedBasis {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl fmt::Display for MarkedBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = crate::poly::default_names(self.ambient.dim());
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        for e in &self.elements {
            writeln!(f, "{:?}  {}", e.mark, e.poly.render(Some(&self.order), &refs))?;
        }
        Ok(())
    }
}

/// How the next S-pair is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairSelection {
    /// Smallest common multiple first.
    #[default]
    Normal,
    /// Tasks in creation order.
    Fifo,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BuchbergerOptions {
    pub selection: PairSelection,
}

/// Reduced marked Gröbner basis of `ideal` under `order`.
pub fn buchberger(ideal: &Ideal, order: &TermOrder) -> Result<MarkedBasis> {
    buchberger_with(ideal, order, BuchbergerOptions::default())
}

pub fn buchberger_with(ideal: &Ideal, order: &TermOrder, opts: BuchbergerOptions) -> Result<MarkedBasis> {
    let s = &ideal.ambient;
    if s.dim() != 2 {
        return Err(Error::DimensionUnsupported(s.dim()));
    }
    order.check_positive(s)?;
    let ctx = Ctx::new(s, order);
    // dead slots hold elements whose mark became divisible by a newer mark
    let mut slots: Vec<Option<Elem>> = Vec::new();
    let mut queue = TaskQueue::new(opts.selection);
    for g in &ideal.generators {
        let terms = ctx.lift(g);
        if !terms.is_empty() {
            queue.push(terms[0].key.clone(), Task::Poly(terms));
        }
    }
    while let Some(task) = queue.pop() {
        let f = match task {
            Task::Poly(f) => f,
            Task::Pair(i, j, m) => match (&slots[i], &slots[j]) {
                (Some(a), Some(b)) => ctx.spoly(a, b, &m),
                _ => continue,
            },
        };
        let live: Vec<Elem> = slots.iter().flatten().cloned().collect();
        let h = ctx.reduce(f, &live);
        if h.is_empty() {
            continue;
        }
        let e = ctx.monic(h);
        let k = slots.len();
        for (i, slot) in slots.iter_mut().enumerate() {
            let Some(old) = slot else { continue };
            if e.levels[0] <= old.levels[0] && e.levels[1] <= old.levels[1] {
                let terms = std::mem::take(&mut old.terms);
                queue.push(terms[0].key.clone(), Task::Poly(terms));
                *slot = None;
                continue;
            }
            for m in s.min_common_multiples(&old.mark, &e.mark)? {
                queue.push(order.key(&m), Task::Pair(i, k, m));
            }
        }
        slots.push(Some(e));
    }
    let reduced = ctx.autoreduce(slots.into_iter().flatten().collect());
    ctx.finish(reduced, ideal.field)
}

/// Makes a list of polynomials monic and mutually reduced. When the input is
/// a Gröbner basis the result is the reduced basis of the ideal it spans.
pub fn interreduce(
    polys: &[SemigroupPolynomial],
    order: &TermOrder,
    ambient: &AffineSemigroup,
) -> Result<MarkedBasis> {
    order.check_positive(ambient)?;
    let field = polys.first().map_or(FieldSpec::RATIONALS, |p| p.field());
    let ctx = Ctx::new(ambient, order);
    let mut elems = Vec::new();
    for p in polys {
        p.check_in(ambient)?;
        let terms = ctx.lift(p);
        if !terms.is_empty() {
            elems.push(ctx.monic(terms));
        }
    }
    let reduced = ctx.autoreduce(elems);
    ctx.finish(reduced, field)
}

/// `f ∈ I`, decided by reduction modulo the reduced basis.
pub fn member(f: &SemigroupPolynomial, ideal: &Ideal, order: &TermOrder) -> Result<bool> {
    let b = buchberger(ideal, order)?;
    Ok(b.normal_form(f)?.is_zero())
}

/// Initial forms `in_w(g)` of the reduced basis for the order `[w]` over
/// `order`; they generate `in_w(I)`.
pub fn initial_ideal(ideal: &Ideal, w: &[i64], order: &TermOrder) -> Result<Vec<SemigroupPolynomial>> {
    let s = &ideal.ambient;
    if w.len() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            got: w.len(),
        });
    }
    if s.generators().iter().any(|g| dot(w, g) < 0) {
        return Err(Error::InvalidInput(format!("weight {w:?} is not in σ")));
    }
    let refined = order.refined_int(w)?;
    let b = buchberger(ideal, &refined)?;
    let wq = crate::poly::int_weight(w);
    b.elements.iter().map(|e| e.poly.initial_form(&wq)).collect()
}

/// Size of the staircase `S ∖ (marks + S)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Staircase {
    Finite(u64),
    Infinite,
}

/// Counts the points of `S` not divisible by any mark.
///
/// The count is finite exactly when each boundary ray of `σ̌` carries a
/// mark. Those two marks bound the staircase inside a parallelogram, which
/// is then enumerated.
pub fn staircase_dimension(marks: &[Exponent], s: &AffineSemigroup) -> Result<Staircase> {
    if s.dim() != 2 {
        return Err(Error::DimensionUnsupported(s.dim()));
    }
    let n = s.facet_normals();
    let on_facet = |a: usize, b: usize| {
        marks
            .iter()
            .filter(|m| dot(&n[a], m) == 0)
            .map(|m| dot(&n[b], m))
            .min()
    };
    let (Some(bound1), Some(bound0)) = (on_facet(0, 1), on_facet(1, 0)) else {
        return Ok(Staircase::Infinite);
    };
    let count = s
        .points_below([bound0, bound1])?
        .into_iter()
        .filter(|x| marks.iter().all(|m| !s.divides(m, x)))
        .count();
    Ok(Staircase::Finite(count as u64))
}

#[derive(Debug, Clone)]
struct Term {
    key: OrderKey,
    exp: Exponent,
    coeff: Coeff,
}

/// Terms sorted by strictly decreasing order key.
type Terms = Vec<Term>;

#[derive(Debug, Clone)]
struct Elem {
    terms: Terms,
    mark: Exponent,
    /// Facet pairings of the mark.
    levels: [i64; 2],
}

struct Ctx<'a> {
    s: &'a AffineSemigroup,
    order: &'a TermOrder,
}

impl<'a> Ctx<'a> {
    fn new(s: &'a AffineSemigroup, order: &'a TermOrder) -> Self {
        Ctx { s, order }
    }

    fn levels(&self, u: &[i64]) -> [i64; 2] {
        let n = self.s.facet_normals();
        [dot(&n[0], u), dot(&n[1], u)]
    }

    fn lift(&self, f: &SemigroupPolynomial) -> Terms {
        let mut terms: Terms = f
            .terms()
            .map(|(e, c)| Term {
                key: self.order.key(e),
                exp: e.clone(),
                coeff: c.clone(),
            })
            .collect();
        terms.sort_by(|a, b| b.key.cmp(&a.key));
        terms
    }

    fn lower(&self, terms: &Terms, field: FieldSpec) -> SemigroupPolynomial {
        SemigroupPolynomial::from_terms(
            field,
            self.s.dim(),
            terms.iter().map(|t| (t.exp.clone(), t.coeff.clone())),
        )
        .expect("terms share field and dimension")
    }

    fn elem(&self, f: &SemigroupPolynomial, mark: &Exponent) -> Elem {
        Elem {
            terms: self.lift(f),
            mark: mark.clone(),
            levels: self.levels(mark),
        }
    }

    fn monic(&self, mut terms: Terms) -> Elem {
        let inv = terms[0].coeff.inv().expect("leading coefficient is nonzero");
        if !inv.is_one() {
            for t in &mut terms {
                t.coeff = &t.coeff * &inv;
            }
        }
        let mark = terms[0].exp.clone();
        Elem {
            levels: self.levels(&mark),
            mark,
            terms,
        }
    }

    /// `f − c·x^shift·g`, where `f` is taken from index `start`.
    fn sub_shifted(&self, f: &[Term], g: &[Term], shift: &Exponent, c: &Coeff) -> Terms {
        let dk = self.order.key(shift);
        let shifted = |t: &Term| -> OrderKey { t.key.iter().zip(&dk).map(|(a, b)| a + b).collect() };
        let mut out = Vec::with_capacity(f.len() + g.len());
        let (mut i, mut j) = (0, 0);
        let mut gk = g.first().map(shifted);
        while i < f.len() || j < g.len() {
            let ord = match (f.get(i), &gk) {
                (Some(a), Some(k)) => a.key.cmp(k),
                (Some(_), None) => Ordering::Greater,
                (None, _) => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    out.push(f[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(Term {
                        key: gk.take().expect("g term present"),
                        exp: g[j].exp.add(shift),
                        coeff: -&(&g[j].coeff * c),
                    });
                    j += 1;
                    gk = g.get(j).map(shifted);
                }
                Ordering::Equal => {
                    let coeff = &f[i].coeff - &(&g[j].coeff * c);
                    if !coeff.is_zero() {
                        out.push(Term {
                            key: gk.take().expect("g term present"),
                            exp: f[i].exp.clone(),
                            coeff,
                        });
                    }
                    i += 1;
                    j += 1;
                    gk = g.get(j).map(shifted);
                }
            }
        }
        out
    }

    fn divisor<'b>(&self, t: &Term, basis: &'b [Elem]) -> Option<&'b Elem> {
        let lv = self.levels(&t.exp);
        basis
            .iter()
            .find(|b| lv[0] >= b.levels[0] && lv[1] >= b.levels[1])
    }

    /// Full reduction: repeatedly cancels the largest reducible term using
    /// the first basis element whose mark divides it.
    fn reduce(&self, mut f: Terms, basis: &[Elem]) -> Terms {
        let mut rem = Vec::new();
        let mut i = 0;
        while i < f.len() {
            match self.divisor(&f[i], basis) {
                None => {
                    i += 1;
                }
                Some(b) => {
                    rem.extend_from_slice(&f[..i]);
                    let lc = &b.terms[0].coeff;
                    let c = if lc.is_one() {
                        f[i].coeff.clone()
                    } else {
                        f[i].coeff.div(lc).expect("same field")
                    };
                    let shift = f[i].exp.sub(&b.mark);
                    f = self.sub_shifted(&f[i..], &b.terms, &shift, &c);
                    i = 0;
                }
            }
        }
        rem.extend(f);
        rem
    }

    fn spoly(&self, a: &Elem, b: &Elem, m: &Exponent) -> Terms {
        let sa = m.sub(&a.mark);
        let sb = m.sub(&b.mark);
        let ca = a.terms[0].coeff.inv().expect("nonzero");
        let cb = b.terms[0].coeff.inv().expect("nonzero");
        let dk = self.order.key(&sa);
        let fa: Terms = a
            .terms
            .iter()
            .map(|t| Term {
                key: t.key.iter().zip(&dk).map(|(x, y)| x + y).collect(),
                exp: t.exp.add(&sa),
                coeff: &t.coeff * &ca,
            })
            .collect();
        self.sub_shifted(&fa, &b.terms, &sb, &cb)
    }

    /// Drops elements with a divisible mark, then reduces each element
    /// against the others until nothing changes.
    fn autoreduce(&self, mut elems: Vec<Elem>) -> Vec<Elem> {
        loop {
            elems.sort_by(|a, b| b.terms[0].key.cmp(&a.terms[0].key));
            let mut changed = false;
            let mut i = 0;
            while i < elems.len() {
                let others: Vec<Elem> = elems
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, e)| e.clone())
                    .collect();
                let lead_reducible = self.divisor(&elems[i].terms[0], &others).is_some();
                let r = self.reduce(elems[i].terms.clone(), &others);
                if r.is_empty() {
                    elems.remove(i);
                    changed = true;
                    continue;
                }
                let same = !lead_reducible
                    && r.len() == elems[i].terms.len()
                    && r.iter().zip(&elems[i].terms).all(|(a, b)| a.key == b.key && a.coeff == b.coeff);
                if !same {
                    elems[i] = self.monic(r);
                    changed = true;
                }
                i += 1;
            }
            if !changed {
                return elems;
            }
        }
    }

    fn finish(&self, elems: Vec<Elem>, field: FieldSpec) -> Result<MarkedBasis> {
        let elements = elems
            .iter()
            .map(|e| MarkedPoly {
                poly: self.lower(&e.terms, field),
                mark: e.mark.clone(),
            })
            .collect();
        MarkedBasis::new(self.order.clone(), elements, self.s.clone())
    }
}

enum Task {
    Poly(Terms),
    Pair(usize, usize, Exponent),
}

/// Pending polynomials and S-pairs. Normal selection takes the task with the
/// smallest leading key, ties broken by arrival.
enum TaskQueue {
    Normal(BTreeMap<(OrderKey, usize), Task>, usize),
    Fifo(VecDeque<Task>),
}

impl TaskQueue {
    fn new(sel: PairSelection) -> Self {
        match sel {
            PairSelection::Normal => TaskQueue::Normal(BTreeMap::new(), 0),
            PairSelection::Fifo => TaskQueue::Fifo(VecDeque::new()),
        }
    }

    fn push(&mut self, key: OrderKey, task: Task) {
        match self {
            TaskQueue::Normal(map, seq) => {
                map.insert((key, *seq), task);
                *seq += 1;
            }
            TaskQueue::Fifo(q) => q.push_back(task),
        }
    }

    fn pop(&mut self) -> Option<Task> {
        match self {
            TaskQueue::Normal(map, _) => map.pop_first().map(|(_, t)| t),
            TaskQueue::Fifo(q) => q.pop_front(),
        }
    }
}
