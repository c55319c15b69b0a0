//! Poincaré compactification of planar polynomial fields, infinite
//! equilibria, and the horizontal blow-up of the degenerate point at the
//! origin of chart U2.

mod blowup;
mod poly;

pub use blowup::{
    blowup_horizontal, classify_blowup_origin, o2_sector_data, BlowupOrigin, BlowupStage, BlowupSystem, SectorData,
    SectorKind, Separatrix,
};
pub use poly::{family_system, real_roots, Poly, PolySystem};

use num::Num;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::local;
use crate::model::{Kind, Mat2, Params, Point2, PointName};

/// Local charts of the Poincaré sphere. `U3` is the affine plane itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chart {
    U1,
    U2,
    U3,
}

impl std::fmt::Display for Chart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Chart::U1 => "U1",
            Chart::U2 => "U2",
            Chart::U3 => "affine",
        })
    }
}

/// A polynomial field written in the local coordinates `(u, v)` of a chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartSystem<T> {
    pub chart: Chart,
    pub system: PolySystem<T>,
}

/// Expresses `sys` in `chart`:
///
/// ```text
/// U1: u̇ = vᵈ[−u P(1/v, u/v) + Q(1/v, u/v)],  v̇ = −vᵈ⁺¹ P(1/v, u/v)
/// U2: u̇ = vᵈ[P(u/v, 1/v) − u Q(u/v, 1/v)],   v̇ = −vᵈ⁺¹ Q(u/v, 1/v)
/// U3: u̇ = P(u, v),                            v̇ = Q(u, v)
/// ```
///
/// Each monomial `xⁱyʲ` of degree `i + j ≤ d` contributes `v^{d−i−j}` times a
/// power of `u`, so the result is polynomial of degree at most `d + 1`.
pub fn compactify<T: Num + Clone>(sys: &PolySystem<T>, chart: Chart) -> Result<ChartSystem<T>> {
    let d = sys.degree();
    if d < 1 {
        return Err(Error::DegreeTooLow(d));
    }
    if chart == Chart::U3 {
        return Ok(ChartSystem {
            chart,
            system: sys.clone(),
        });
    }
    // vᵈ P and vᵈ Q in the chart variables
    let lift = |poly: &Poly<T>| {
        let mut out = Poly::zero(d);
        for (i, j, c) in poly.terms() {
            let vexp = d - i - j;
            let uexp = if chart == Chart::U1 { j } else { i };
            out.add(uexp, vexp, c.clone());
        }
        out
    };
    let lp = lift(&sys.p);
    let lq = lift(&sys.q);
    let mut u_dot = Poly::zero(d + 1);
    let mut v_dot = Poly::zero(d + 1);
    let (own, other) = match chart {
        Chart::U1 => (&lp, &lq),
        _ => (&lq, &lp),
    };
    // U1: u̇ = −u·lp + lq, v̇ = −v·lp.  U2: u̇ = lp − u·lq, v̇ = −v·lq.
    for (i, j, c) in own.terms() {
        let neg = T::zero() - c.clone();
        u_dot.add(i + 1, j, neg.clone());
        v_dot.add(i, j + 1, neg);
    }
    for (i, j, c) in other.terms() {
        u_dot.add(i, j, c.clone());
    }
    Ok(ChartSystem {
        chart,
        system: PolySystem::new(u_dot, v_dot),
    })
}

fn homogeneous(chart: Chart, pt: Point2) -> [f64; 3] {
    match chart {
        Chart::U1 => [1.0, pt.x, pt.y],
        Chart::U2 => [pt.x, 1.0, pt.y],
        Chart::U3 => [pt.x, pt.y, 1.0],
    }
}

/// Moves a point between chart coordinates through the sphere.
pub fn chart_transition(from: Chart, to: Chart, pt: Point2) -> Result<Point2> {
    let [x, y, z] = homogeneous(from, pt);
    let (den, a, b) = match to {
        Chart::U1 => (x, y, z),
        Chart::U2 => (y, x, z),
        Chart::U3 => (z, x, y),
    };
    if den == 0.0 {
        return Err(Error::ChartDomain {
            from,
            to,
            u: pt.x,
            v: pt.y,
        });
    }
    Ok(Point2::new(a / den, b / den))
}

/// Projection of a chart point onto the Poincaré disc:
/// `(X, Y) / ‖(X, Y, Z)‖` for homogeneous coordinates `(X, Y, Z)`.
pub fn to_disc(chart: Chart, pt: Point2) -> Point2 {
    let [x, y, z] = homogeneous(chart, pt);
    let n = (x * x + y * y + z * z).sqrt();
    Point2::new(x / n, y / n)
}

/// An equilibrium of the compactified field on the equator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfinitePoint {
    pub chart: Chart,
    pub location: Point2,
    pub kind: Kind,
    pub linear_part: Mat2,
    pub sector_data: Option<SectorData>,
}

impl InfinitePoint {
    pub fn name(&self) -> Option<PointName> {
        if self.location.x != 0.0 {
            return None;
        }
        match self.chart {
            Chart::U1 => Some(PointName::O1),
            Chart::U2 => Some(PointName::O2),
            Chart::U3 => None,
        }
    }
}

fn kind_of(j: &Mat2) -> Kind {
    local::classify_hyperbolic(j).unwrap_or(Kind::Degenerate)
}

/// Equilibria at infinity: the real zeros of `u̇(u, 0)` in chart U1 and the
/// origin of U2 when it is singular. Points in the opposite charts `V1`,
/// `V2` are the antipodes and are not listed.
///
/// If `u̇(u, 0)` vanishes identically the equator consists of equilibria and
/// no isolated U1 points are reported.
pub fn infinite_singular_points(sys: &PolySystem<f64>) -> Result<Vec<InfinitePoint>> {
    let u1 = compactify(sys, Chart::U1)?.system;
    let u2 = compactify(sys, Chart::U2)?.system;
    let cap = u1.p.cap();
    let on_equator: Vec<f64> = (0..=cap).map(|k| u1.p.get(k, 0)).collect();
    let mut out = Vec::new();
    for u in real_roots(&on_equator) {
        let u = if u.abs() < 1e-15 { 0.0 } else { u };
        let j = u1.jacobian(u, 0.0);
        out.push(InfinitePoint {
            chart: Chart::U1,
            location: Point2::new(u, 0.0),
            kind: kind_of(&j),
            linear_part: j,
            sector_data: None,
        });
    }
    let (pu, pv) = u2.eval(&0.0, &0.0);
    if pu == 0.0 && pv == 0.0 {
        let j = u2.jacobian(0.0, 0.0);
        out.push(InfinitePoint {
            chart: Chart::U2,
            location: Point2::new(0.0, 0.0),
            kind: kind_of(&j),
            linear_part: j,
            sector_data: None,
        });
    }
    Ok(out)
}

/// Infinite points of the predator-prey family, with the positive-quadrant
/// sector structure of O2 obtained from the blow-up.
pub fn family_infinite_points(p: &Params) -> Result<Vec<InfinitePoint>> {
    let sys = family_system(&p.b(), &p.c(), &p.delta());
    let mut pts = infinite_singular_points(&sys)?;
    let u2 = compactify(&sys, Chart::U2)?;
    let (_, rescaled) = blowup_horizontal(&u2)?;
    let origin = classify_blowup_origin(&rescaled, p)?;
    let sector = o2_sector_data(&origin);
    for pt in pts.iter_mut() {
        if pt.name() == Some(PointName::O2) {
            pt.sector_data = Some(sector.clone());
        }
    }
    Ok(pts)
}

/// Sign of the flow along the equator `v = 0` of chart U1 for `u > 0`:
/// positive means the arc is traversed from O1 towards O2.
pub fn equator_flow_sign(sys: &PolySystem<f64>) -> Result<f64> {
    let u1 = compactify(sys, Chart::U1)?.system;
    // sample between consecutive equilibria is overkill here; the family has
    // O1 as the only U1 zero, so one positive sample decides the direction
    Ok(u1.p.eval(&1.0, &0.0).signum())
}
