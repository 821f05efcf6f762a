//! Cells of the Gröbner fan of an ideal in a two-dimensional semigroup
//! algebra, computed by sweeping across `σ`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groebner::{buchberger, Ideal, MarkedBasis};
use crate::lattice::{det2, dot, perp, primitive};
use crate::poly::TermOrder;
use crate::semigroup::{is_regular_cone, Cone, Exponent};

/// Upper bound on the number of sweep steps.
pub const SWEEP_BUDGET: usize = 10_000;

/// A two-dimensional cell with counter-clockwise rays and the reduced basis
/// shared by its interior weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanCell {
    pub rays: [Vec<i64>; 2],
    pub basis: MarkedBasis,
    pub regular: bool,
}

impl FanCell {
    pub fn cone(&self) -> Cone {
        Cone::new(self.rays.to_vec()).expect("cell rays span a strictly convex cone")
    }

    pub fn marks(&self) -> Vec<Exponent> {
        self.basis.marks()
    }

    /// `w` lies in the closed cell.
    pub fn contains(&self, w: &[i64]) -> bool {
        det2(&self.rays[0], w) >= 0 && det2(w, &self.rays[1]) >= 0
    }

    /// `w` lies in the open cell.
    pub fn interior_contains(&self, w: &[i64]) -> bool {
        det2(&self.rays[0], w) > 0 && det2(w, &self.rays[1]) > 0
    }
}

/// The cells of `GF(I)` covering `σ`, listed counter-clockwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerFan2 {
    pub sigma: Cone,
    pub cells: Vec<FanCell>,
}

/// Serializable summary of a fan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanJson {
    pub sigma: Cone,
    pub cells: Vec<CellJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellJson {
    pub rays: [Vec<i64>; 2],
    pub regular: bool,
    pub marks: Vec<Vec<i64>>,
}

/// Intersection of `σ` with the half-planes `(α − β)·w ≥ 0`, for each element
/// `(g, α)` of the basis and each `β` in the support of `g` other than `α`.
pub fn cone_of_basis(basis: &MarkedBasis, sigma: &Cone) -> Result<[Vec<i64>; 2]> {
    if sigma.dim() != 2 {
        return Err(Error::DimensionUnsupported(sigma.dim()));
    }
    let mut r0 = sigma.rays()[0].clone();
    let mut r1 = sigma.rays()[1].clone();
    for e in basis.elements() {
        for beta in e.poly.support() {
            if *beta == e.mark {
                continue;
            }
            let h = e.mark.sub(beta);
            let (v0, v1) = (dot(&h, &r0), dot(&h, &r1));
            if v0 >= 0 && v1 >= 0 {
                continue;
            }
            if v0 <= 0 && v1 <= 0 {
                return Err(Error::EmptyInterior);
            }
            // the boundary line h·w = 0 crosses the open cell
            let p = perp(&h);
            let d = if det2(&r0, &p) > 0 { p.to_vec() } else { vec![-p[0], -p[1]] };
            let d = primitive(&d);
            if v0 < 0 {
                r0 = d;
            } else {
                r1 = d;
            }
        }
    }
    if det2(&r0, &r1) <= 0 {
        return Err(Error::EmptyInterior);
    }
    Ok([r0, r1])
}

/// The order "weight `ρ`, then an infinitesimal counter-clockwise rotation".
fn sweep_order(ray: &[i64], base: &TermOrder) -> Result<TermOrder> {
    let rot = perp(ray);
    base.refined_int(&rot)?.refined_int(ray)
}

/// Sweeps `σ` counter-clockwise, one cell per step.
///
/// At a ray `ρ`, the order `[ρ, ρ^⊥]` selects the cell lying just after `ρ`;
/// its far ray is where the next step starts.
pub fn groebner_fan_2d(ideal: &Ideal, sigma: &Cone, base: &TermOrder) -> Result<GroebnerFan2> {
    if sigma.dim() != 2 || ideal.ambient().dim() != 2 {
        return Err(Error::DimensionUnsupported(sigma.dim()));
    }
    base.check_positive(ideal.ambient())?;
    let start = sigma.rays()[0].clone();
    let end = sigma.rays()[1].clone();
    let mut ray = start;
    let mut cells = Vec::new();
    for _ in 0..SWEEP_BUDGET {
        let order = sweep_order(&ray, base)?;
        let basis = buchberger(ideal, &order)?;
        let rays = cone_of_basis(&basis, sigma)?;
        if rays[0] != ray {
            return Err(Error::InvariantViolation(format!(
                "cell at {ray:?} starts at {:?}",
                rays[0]
            )));
        }
        let regular = is_regular_cone(&Cone::new(rays.to_vec())?);
        let far = rays[1].clone();
        cells.push(FanCell {
            rays,
            basis,
            regular,
        });
        if far == end {
            return Ok(GroebnerFan2 {
                sigma: sigma.clone(),
                cells,
            });
        }
        ray = far;
    }
    Err(Error::NonTermination(SWEEP_BUDGET))
}

impl GroebnerFan2 {
    /// Exactly one cell, equal to `σ`.
    pub fn is_trivial(&self) -> bool {
        self.cells.len() == 1 && self.cells[0].rays.as_slice() == self.sigma.rays()
    }

    /// `(index, regular)` for each cell.
    pub fn regularity_report(&self) -> Vec<(usize, bool)> {
        self.cells.iter().enumerate().map(|(i, c)| (i, c.regular)).collect()
    }

    pub fn all_regular(&self) -> bool {
        self.cells.iter().all(|c| c.regular)
    }

    /// The cell whose closure contains `w`, preferring the earliest.
    pub fn cell_containing(&self, w: &[i64]) -> Option<usize> {
        self.cells.iter().position(|c| c.contains(w))
    }

    /// Rays shared by consecutive cells, plus the two boundary rays.
    pub fn rays(&self) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = self.cells.iter().map(|c| c.rays[0].clone()).collect();
        if let Some(last) = self.cells.last() {
            out.push(last.rays[1].clone());
        }
        out
    }

    pub fn to_json(&self) -> FanJson {
        FanJson {
            sigma: self.sigma.clone(),
            cells: self
                .cells
                .iter()
                .map(|c| CellJson {
                    rays: c.rays.clone(),
                    regular: c.regular,
                    marks: c.marks().iter().map(|m| m.to_vec()).collect(),
                })
                .collect(),
        }
    }

    /// Deterministic SVG drawing of the fan.
    pub fn to_svg(&self) -> String {
        render_svg(&self.to_json())
    }
}

pub fn is_trivial_fan(fan: &GroebnerFan2) -> bool {
    fan.is_trivial()
}

pub fn regularity_report(fan: &GroebnerFan2) -> Vec<(usize, bool)> {
    fan.regularity_report()
}

const SIZE: f64 = 800.0;
const CENTER: f64 = 400.0;
const RADIUS: f64 = 360.0;
const FILLS: [&str; 2] = ["#dbe7f3", "#b9cfe6"];
const SINGULAR_FILL: &str = "#f2b8a2";

fn endpoint(r: &[i64], radius: f64) -> (f64, f64) {
    let (x, y) = (r[0] as f64, r[1] as f64);
    let len = (x * x + y * y).sqrt();
    // screen y grows downwards
    (CENTER + radius * x / len, CENTER - radius * y / len)
}

/// 800×800 drawing: one triangle per cell, non-regular cells highlighted,
/// rays labeled with their coordinates.
pub fn render_svg(fan: &FanJson) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE:.0}" height="{SIZE:.0}" viewBox="0 0 {SIZE:.0} {SIZE:.0}">"#
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    for (i, c) in fan.cells.iter().enumerate() {
        let (ax, ay) = endpoint(&c.rays[0], RADIUS);
        let (bx, by) = endpoint(&c.rays[1], RADIUS);
        let fill = if c.regular { FILLS[i % 2] } else { SINGULAR_FILL };
        let _ = writeln!(
            s,
            r##"<polygon points="{CENTER:.2},{CENTER:.2} {ax:.2},{ay:.2} {bx:.2},{by:.2}" fill="{fill}" stroke="#4a4a4a" stroke-width="1"/>"##
        );
    }
    let mut rays: Vec<&Vec<i64>> = fan.cells.iter().map(|c| &c.rays[0]).collect();
    if let Some(last) = fan.cells.last() {
        rays.push(&last.rays[1]);
    }
    for r in rays {
        let (x, y) = endpoint(r, RADIUS);
        let (lx, ly) = endpoint(r, RADIUS + 18.0);
        let _ = writeln!(
            s,
            r##"<line x1="{CENTER:.2}" y1="{CENTER:.2}" x2="{x:.2}" y2="{y:.2}" stroke="#1f1f1f" stroke-width="2"/>"##
        );
        let _ = writeln!(
            s,
            r##"<text x="{lx:.2}" y="{ly:.2}" font-family="monospace" font-size="14" text-anchor="middle" dominant-baseline="middle">({},{})</text>"##,
            r[0], r[1]
        );
    }
    let _ = writeln!(
        s,
        r##"<circle cx="{CENTER:.2}" cy="{CENTER:.2}" r="3" fill="#1f1f1f"/>"##
    );
    s.push_str("</svg>\n");
    s
}
