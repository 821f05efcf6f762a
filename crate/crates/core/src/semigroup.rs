//! Rational polyhedral cones, their dual affine semigroups `S = σ̌ ∩ ℤ^d`, and
//! semigroup divisibility.
//!
//! Membership in `S` is tested against the rays of `σ` (the facet normals of
//! `σ̌`). `S` is saturated, so `u` divides `v` exactly when `v − u` satisfies
//! every facet inequality. In dimension 2 the minimal generators are computed
//! from the cone; in higher dimension they are supplied and validated.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::lattice::{det2, dot, gcd_all, lattice_points_2d, perp, primitive, rank};

/// A lattice point, used for semigroup elements and polynomial exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Exponent(SmallVec<[i64; 4]>);

impl Exponent {
    pub fn new(v: &[i64]) -> Self {
        Exponent(SmallVec::from_slice(v))
    }

    pub fn zero(dim: usize) -> Self {
        Exponent(SmallVec::from_elem(0, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(other.0.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Exponent {
        Exponent(self.0.iter().map(|a| a * k).collect())
    }

    pub fn to_vec(&self) -> Vec<i64> {
        self.0.to_vec()
    }
}

impl Deref for Exponent {
    type Target = [i64];

    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for Exponent {
    fn from(v: Vec<i64>) -> Self {
        Exponent(SmallVec::from_vec(v))
    }
}

impl<const N: usize> From<[i64; N]> for Exponent {
    fn from(v: [i64; N]) -> Self {
        Exponent::new(&v)
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl Serialize for Exponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.as_slice().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Vec::<i64>::deserialize(d).map(Exponent::from)
    }
}

/// A rational polyhedral cone given by primitive ray generators.
///
/// Two-dimensional cones always hold exactly two rays stored in
/// counter-clockwise order (`det(ray₀, ray₁) > 0`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ConeRepr", into = "ConeRepr")]
pub struct Cone {
    dim: usize,
    rays: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct ConeRepr {
    dim: usize,
    rays: Vec<Vec<i64>>,
}

impl TryFrom<ConeRepr> for Cone {
    type Error = Error;

    fn try_from(r: ConeRepr) -> Result<Self> {
        let cone = Cone::new(r.rays)?;
        if cone.dim != r.dim {
            return Err(Error::DimensionMismatch {
                expected: r.dim,
                got: cone.dim,
            });
        }
        Ok(cone)
    }
}

impl From<Cone> for ConeRepr {
    fn from(c: Cone) -> Self {
        ConeRepr {
            dim: c.dim,
            rays: c.rays,
        }
    }
}

impl Cone {
    /// Builds a full-dimensional cone. Rays are made primitive and
    /// deduplicated.
    pub fn new(rays: Vec<Vec<i64>>) -> Result<Self> {
        let dim = rays
            .first()
            .map(|r| r.len())
            .ok_or_else(|| Error::NotStrictlyConvex("no rays".into()))?;
        if dim == 0 {
            return Err(Error::NotStrictlyConvex("zero-dimensional ambient space".into()));
        }
        let mut prim: Vec<Vec<i64>> = Vec::new();
        for r in &rays {
            if r.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: r.len(),
                });
            }
            if r.iter().all(|&x| x == 0) {
                return Err(Error::NotStrictlyConvex("zero ray".into()));
            }
            let p = primitive(r);
            if !prim.contains(&p) {
                prim.push(p);
            }
        }
        if dim == 2 {
            if prim.len() != 2 {
                return Err(Error::NotStrictlyConvex(format!(
                    "a 2-dimensional cone needs exactly two distinct rays, got {}",
                    prim.len()
                )));
            }
            let d = det2(&prim[0], &prim[1]);
            if d == 0 {
                return Err(Error::NotStrictlyConvex(format!(
                    "rays {:?} and {:?} are linearly dependent",
                    prim[0], prim[1]
                )));
            }
            if d < 0 {
                prim.swap(0, 1);
            }
        } else if rank(&prim) != dim {
            return Err(Error::NotStrictlyConvex(format!(
                "rays span a space of dimension {} < {dim}",
                rank(&prim)
            )));
        }
        Ok(Cone { dim, rays: prim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    /// True if `w` lies in the cone. Only implemented for `d = 2`, where the
    /// cone is the set of nonnegative combinations of its two rays.
    pub fn contains_2d(&self, w: &[i64]) -> bool {
        let (a, b) = (&self.rays[0], &self.rays[1]);
        det2(a, w) >= 0 && det2(w, b) >= 0
    }

    /// True if `w` lies in the interior of a 2-dimensional cone.
    pub fn interior_contains_2d(&self, w: &[i64]) -> bool {
        let (a, b) = (&self.rays[0], &self.rays[1]);
        det2(a, w) > 0 && det2(w, b) > 0
    }
}

/// Regular cones have ray generators forming part of a lattice basis; for a
/// full-dimensional cone that means `d` rays with determinant ±1.
pub fn is_regular_cone(cone: &Cone) -> bool {
    if cone.rays.len() != cone.dim {
        return false;
    }
    determinant(&cone.rays).abs() == 1
}

fn determinant(rows: &[Vec<i64>]) -> i128 {
    let n = rows.len();
    match n {
        1 => rows[0][0] as i128,
        2 => rows[0][0] as i128 * rows[1][1] as i128 - rows[0][1] as i128 * rows[1][0] as i128,
        _ => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = rows[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * rows[0][j] as i128 * determinant(&minor)
            })
            .sum(),
    }
}

/// The affine semigroup `σ̌ ∩ ℤ^d` described by its minimal generators and the
/// rays of `σ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SemigroupRepr", into = "SemigroupRepr")]
pub struct AffineSemigroup {
    dim: usize,
    generators: Vec<Exponent>,
    facet_normals: Vec<Vec<i64>>,
    edge_count: usize,
    transform: Option<Vec<Vec<i64>>>,
    // d = 2 only: for facet a, the value n_a·g where g spans the other edge
    edge_spans: Option<[i64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct SemigroupRepr {
    generators: Vec<Vec<i64>>,
    facet_normals: Vec<Vec<i64>>,
    edge_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    transform: Option<Vec<Vec<i64>>>,
}

impl TryFrom<SemigroupRepr> for AffineSemigroup {
    type Error = Error;

    fn try_from(r: SemigroupRepr) -> Result<Self> {
        let mut s = AffineSemigroup::new(
            r.generators.into_iter().map(Exponent::from).collect(),
            r.facet_normals,
            r.edge_count,
        )?;
        s.transform = r.transform;
        Ok(s)
    }
}

impl From<AffineSemigroup> for SemigroupRepr {
    fn from(s: AffineSemigroup) -> Self {
        SemigroupRepr {
            generators: s.generators.iter().map(|g| g.to_vec()).collect(),
            facet_normals: s.facet_normals,
            edge_count: s.edge_count,
            transform: s.transform,
        }
    }
}

impl AffineSemigroup {
    /// Validates user-supplied generators against the facet normals.
    ///
    /// The first `edge_count` generators must be the primitive generators of
    /// the edges of `σ̌`, the generating set must be minimal, and every
    /// generator must satisfy all facet inequalities. Completeness of the
    /// generating set is taken on trust.
    pub fn new(
        generators: Vec<Exponent>,
        facet_normals: Vec<Vec<i64>>,
        edge_count: usize,
    ) -> Result<Self> {
        let dim = generators
            .first()
            .map(|g| g.dim())
            .ok_or_else(|| Error::InvalidSemigroup("no generators".into()))?;
        let invalid = |msg: String| Err(Error::InvalidSemigroup(msg));
        for g in &generators {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: g.dim(),
                });
            }
        }
        for n in &facet_normals {
            if n.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: n.len(),
                });
            }
        }
        if rank(&facet_normals) != dim {
            return invalid("facet normals do not span the ambient space (σ̌ is not pointed)".into());
        }
        let gens_rows: Vec<Vec<i64>> = generators.iter().map(|g| g.to_vec()).collect();
        if rank(&gens_rows) != dim {
            return invalid("generators do not span the ambient space".into());
        }
        if dim == 2 && facet_normals.len() != 2 {
            return invalid("a 2-dimensional semigroup needs exactly two facet normals".into());
        }
        if edge_count < dim || edge_count > generators.len() {
            return invalid(format!("edge count {edge_count} out of range"));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.is_zero() {
                return invalid("zero generator".into());
            }
            if facet_normals.iter().any(|n| dot(n, g) < 0) {
                return invalid(format!("generator {g:?} lies outside the dual cone"));
            }
            if generators[..i].contains(g) {
                return invalid(format!("duplicate generator {g:?}"));
            }
        }
        for (i, g) in generators.iter().enumerate() {
            let on_edge = {
                let tight: Vec<Vec<i64>> = facet_normals
                    .iter()
                    .filter(|n| dot(n, g) == 0)
                    .cloned()
                    .collect();
                rank(&tight) == dim - 1
            };
            if on_edge != (i < edge_count) {
                return invalid(format!(
                    "generator {g:?} at position {i} {} on an edge, but edge count is {edge_count}",
                    if on_edge { "lies" } else { "does not lie" }
                ));
            }
            for (j, h) in generators.iter().enumerate() {
                if i != j && facet_normals.iter().all(|n| dot(n, g) >= dot(n, h)) {
                    return invalid(format!("generator {g:?} is divisible by {h:?}"));
                }
            }
        }
        let edge_spans = if dim == 2 {
            // pair each facet with the edge generator it does not vanish on
            let on_facet = |a: usize| {
                generators[..2]
                    .iter()
                    .position(|g| dot(&facet_normals[a], g) == 0)
                    .expect("2d edge generators sit on facets")
            };
            let g_on_0 = on_facet(0);
            let g_on_1 = on_facet(1);
            Some([
                dot(&facet_normals[0], &generators[g_on_1]),
                dot(&facet_normals[1], &generators[g_on_0]),
            ])
        } else {
            None
        };
        Ok(AffineSemigroup {
            dim,
            generators,
            facet_normals,
            edge_count,
            transform: None,
            edge_spans,
        })
    }

    /// Like [`AffineSemigroup::new`] but determines the edge generators
    /// itself and moves them to the front (keeping relative order).
    pub fn from_generators(generators: Vec<Exponent>, facet_normals: Vec<Vec<i64>>) -> Result<Self> {
        let dim = generators.first().map_or(0, |g| g.dim());
        if dim == 0 {
            return Err(Error::InvalidSemigroup("no generators".into()));
        }
        let on_edge = |g: &Exponent| {
            let tight: Vec<Vec<i64>> = facet_normals
                .iter()
                .filter(|n| n.len() == g.dim() && dot(n, g) == 0)
                .cloned()
                .collect();
            rank(&tight) + 1 == dim
        };
        let (edges, rest): (Vec<Exponent>, Vec<Exponent>) =
            generators.into_iter().partition(|g| on_edge(g));
        let r = edges.len();
        AffineSemigroup::new(edges.into_iter().chain(rest).collect(), facet_normals, r)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Exponent] {
        &self.generators
    }

    pub fn facet_normals(&self) -> &[Vec<i64>] {
        &self.facet_normals
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// The unimodular change of coordinates applied to exponents during
    /// construction, if any (rows of the matrix `U`, exponent `u ↦ U u`).
    pub fn transform(&self) -> Option<&[Vec<i64>]> {
        self.transform.as_deref()
    }

    /// The cone `σ` spanned by the facet normals.
    pub fn sigma(&self) -> Cone {
        Cone::new(self.facet_normals.clone()).expect("facet normals span a valid cone")
    }

    /// True iff the semigroup is free on `d` generators, i.e. `σ` is regular.
    pub fn is_regular(&self) -> bool {
        self.generators.len() == self.dim
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        v.len() == self.dim && self.facet_normals.iter().all(|n| dot(n, v) >= 0)
    }

    /// `v − u` when `u` divides `v` in the semigroup.
    pub fn divide(&self, u: &Exponent, v: &Exponent) -> Option<Exponent> {
        let w = v.sub(u);
        self.contains(&w).then_some(w)
    }

    /// `u` divides `v`, without materializing the quotient.
    pub fn divides(&self, u: &[i64], v: &[i64]) -> bool {
        self.facet_normals.iter().all(|n| dot(n, v) >= dot(n, u))
    }

    /// All divisibility-minimal elements of `(u + S) ∩ (v + S)`, in
    /// lexicographic order.
    ///
    /// The common-multiple region is `{x : nᵢ·x ≥ max(nᵢ·u, nᵢ·v)}`. A minimal
    /// element `x` cannot have `x − g` in the region for the edge generator
    /// `g` lying on the other facet, which confines the search to a bounded
    /// parallelogram.
    pub fn min_common_multiples(&self, u: &Exponent, v: &Exponent) -> Result<Vec<Exponent>> {
        let spans = self.edge_spans.ok_or(Error::DimensionUnsupported(self.dim))?;
        let n = &self.facet_normals;
        let lo = [
            dot(&n[0], u).max(dot(&n[0], v)),
            dot(&n[1], u).max(dot(&n[1], v)),
        ];
        let hi = [lo[0] + spans[0], lo[1] + spans[1]];
        let region = |x: &[i64]| dot(&n[0], x) >= lo[0] && dot(&n[1], x) >= lo[1];
        let out = lattice_points_2d([&n[0], &n[1]], lo, hi)
            .into_iter()
            .filter(|x| {
                self.generators.iter().all(|g| {
                    let y = [x[0] - g[0], x[1] - g[1]];
                    !region(&y)
                })
            })
            .map(|x| Exponent::new(&x))
            .collect();
        Ok(out)
    }

    /// The lattice points `x ∈ S` with `nᵢ·x < bound[i]` for both facets
    /// (`d = 2` only).
    pub fn points_below(&self, bound: [i64; 2]) -> Result<Vec<Exponent>> {
        if self.dim != 2 {
            return Err(Error::DimensionUnsupported(self.dim));
        }
        let n = &self.facet_normals;
        Ok(lattice_points_2d([&n[0], &n[1]], [0, 0], bound)
            .into_iter()
            .map(|x| Exponent::new(&x))
            .collect())
    }

    /// For each facet `a` of a 2-dimensional semigroup, `n_a·g` where `g` is
    /// the edge generator not lying on that facet.
    pub fn edge_spans(&self) -> Option<[i64; 2]> {
        self.edge_spans
    }
}

/// Minimal generators of `σ̌ ∩ ℤ²` for a 2-dimensional cone `σ`.
///
/// Edge generators come first, then interior generators, each group sorted by
/// angle. When `σ̌` is not already inside the positive quadrant a unimodular
/// change of coordinates is applied and recorded in
/// [`AffineSemigroup::transform`].
pub fn dual_generators(cone: &Cone) -> Result<AffineSemigroup> {
    if cone.dim() != 2 {
        return Err(Error::DimensionUnsupported(cone.dim()));
    }
    let (r0, r1) = (&cone.rays[0], &cone.rays[1]);
    let e0 = edge_generator(r0, r1);
    let e1 = edge_generator(r1, r0);
    if e0.iter().chain(e1.iter()).any(|&x| x < 0) {
        let (u, b) = positive_chart(&e0, &e1);
        // n·x is preserved when normals map by Bᵀ
        let map = |r: &Vec<i64>| vec![b[0][0] * r[0] + b[1][0] * r[1], b[0][1] * r[0] + b[1][1] * r[1]];
        let moved = Cone::new(vec![map(r0), map(r1)])?;
        let mut s = dual_generators(&moved)?;
        s.transform = Some(u.iter().map(|r| r.to_vec()).collect());
        return Ok(s);
    }
    // lattice points of the half-open fundamental parallelogram of e0, e1
    let mut candidates: Vec<[i64; 2]> = vec![e0, e1];
    for x in lattice_points_2d([r1, r0], [0, 0], [dot(r1, &e0), dot(r0, &e1)]) {
        if x != [0, 0] && !candidates.contains(&x) {
            candidates.push(x);
        }
    }
    let normals = vec![r0.clone(), r1.clone()];
    let in_s = |x: &[i64]| normals.iter().all(|n| dot(n, x) >= 0);
    let minimal: Vec<[i64; 2]> = candidates
        .iter()
        .filter(|x| {
            !candidates
                .iter()
                .any(|c| c != *x && in_s(&[x[0] - c[0], x[1] - c[1]]))
        })
        .copied()
        .collect();
    let by_angle = |a: &[i64; 2], b: &[i64; 2]| match det2(a, b).cmp(&0) {
        Ordering::Greater => Ordering::Less,
        Ordering::Less => Ordering::Greater,
        Ordering::Equal => a.cmp(b),
    };
    let mut edges: Vec<[i64; 2]> = minimal.iter().filter(|x| **x == e0 || **x == e1).copied().collect();
    let mut interior: Vec<[i64; 2]> = minimal.iter().filter(|x| **x != e0 && **x != e1).copied().collect();
    edges.sort_by(by_angle);
    interior.sort_by(by_angle);
    let gens = edges.iter().chain(interior.iter()).map(|x| Exponent::new(x)).collect();
    AffineSemigroup::new(gens, normals, 2)
}

/// Primitive generator of the edge of `σ̌` orthogonal to `r`, oriented so
/// that it pairs positively with `other`.
fn edge_generator(r: &[i64], other: &[i64]) -> [i64; 2] {
    let p = perp(r);
    if dot(other, &p) > 0 {
        p
    } else {
        [-p[0], -p[1]]
    }
}

/// A unimodular `U` (with inverse `B`) such that `U e0 = (1, 0)` and `U e1`
/// has nonnegative entries.
fn positive_chart(e0: &[i64; 2], e1: &[i64; 2]) -> ([[i64; 2]; 2], [[i64; 2]; 2]) {
    let ext = e0[0].extended_gcd(&e0[1]);
    // e0 primitive: a·x + b·y = ±1
    let sign = ext.gcd.signum();
    let mut f = [-ext.y * sign, ext.x * sign];
    debug_assert_eq!(det2(e0, &f), 1);
    // coordinates of e1 in the basis (e0, f) are (a, c)
    if det2(e0, e1) < 0 {
        f = [-f[0], -f[1]];
    }
    let d = det2(e0, &f);
    let a = det2(e1, &f) * d;
    let c = det2(e0, e1) * d;
    // f ↦ f + k·e0 turns a into a − k·c
    let k = Integer::div_floor(&a, &c);
    let f = [f[0] + k * e0[0], f[1] + k * e0[1]];
    // B has columns e0, f
    let b = [[e0[0], f[0]], [e0[1], f[1]]];
    let det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
    let u = [
        [b[1][1] * det, -b[0][1] * det],
        [-b[1][0] * det, b[0][0] * det],
    ];
    (u, b)
}

/// Generators reported as primitive vectors with the content divided out.
pub fn is_primitive(v: &[i64]) -> bool {
    gcd_all(v) == 1
}
