//! The predator-prey family, its finite equilibria and the parameter-space
//! case classification.

mod classify;
mod params;

pub use classify::{
    classify_case, classify_case_exact, classify_case_float, Arithmetic, Boundary, CaseLabel, Portrait, Region, Status,
    BAND_EPS,
};
pub use params::{ExactParams, Params};

use num::complex::Complex64;
use num::{BigRational, Num};
use serde::{Deserialize, Serialize};

use crate::compactify::Chart;

/// A point of the affine plane (prey `x`, predator `y`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(&self, other: &Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Row-major 2×2 real matrix.
pub type Mat2 = [[f64; 2]; 2];

/// Eigenvalues of a real 2×2 matrix, ordered by decreasing real part (and
/// positive imaginary part first for a complex pair).
pub fn eigenvalues(m: &Mat2) -> [Complex64; 2] {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = tr * tr - 4.0 * det;
    if disc >= 0.0 {
        let s = disc.sqrt();
        // avoid cancellation in the smaller root
        let big = if tr >= 0.0 { (tr + s) / 2.0 } else { (tr - s) / 2.0 };
        let small = if big != 0.0 { det / big } else { 0.0 };
        let (hi, lo) = if big >= small { (big, small) } else { (small, big) };
        [Complex64::new(hi, 0.0), Complex64::new(lo, 0.0)]
    } else {
        let im = (-disc).sqrt() / 2.0;
        [Complex64::new(tr / 2.0, im), Complex64::new(tr / 2.0, -im)]
    }
}

/// Local type of an equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Saddle,
    StableNode,
    UnstableNode,
    StableFocus,
    UnstableFocus,
    WeakStableFocus,
    SaddleNode,
    Degenerate,
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Kind::Saddle => "saddle",
            Kind::StableNode => "stable-node",
            Kind::UnstableNode => "unstable-node",
            Kind::StableFocus => "stable-focus",
            Kind::UnstableFocus => "unstable-focus",
            Kind::WeakStableFocus => "weak-stable-focus",
            Kind::SaddleNode => "saddle-node",
            Kind::Degenerate => "degenerate",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointName {
    P0,
    P1,
    P2,
    O1,
    O2,
}

impl std::fmt::Display for PointName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A finite or infinite equilibrium. Infinite points carry chart
/// coordinates; finite ones live in [`Chart::U3`] (the affine plane).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub name: PointName,
    pub chart: Chart,
    pub location: Point2,
    pub kind: Kind,
    pub eigenvalues: Option<[Complex64; 2]>,
}

/// Closed-form discriminants `A` and `B` of the interior equilibrium.
///
/// `A` carries the sign of the trace of the Jacobian at P2 and `B` the sign
/// of its eigenvalue discriminant:
/// `tr² − 4 det = b² δ B / (c−δ)⁴`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Discriminants {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
}

/// `A = δ(c−δ) − bδ(c+δ)`.
pub(crate) fn disc_a<T: Num + Clone>(b: &T, c: &T, d: &T) -> T {
    d.clone() * (c.clone() - d.clone()) - b.clone() * d.clone() * (c.clone() + d.clone())
}

/// `B = δ(δ(b+1) + c(b−1))² − 4c(c−δ)²(c − δ(b+1))`.
pub(crate) fn disc_b<T: Num + Clone>(b: &T, c: &T, d: &T) -> T {
    let one = T::one();
    let four = one.clone() + one.clone() + one.clone() + one.clone();
    let x = d.clone() * (b.clone() + one.clone()) + c.clone() * (b.clone() - one.clone());
    let cmd = c.clone() - d.clone();
    d.clone() * x.clone() * x - four * c.clone() * cmd.clone() * cmd * (c.clone() - d.clone() * (b.clone() + one))
}

/// `bδ − (c−δ)`: positive in case 1, zero in case 2, negative when P2 exists.
pub(crate) fn p1_gap<T: Num + Clone>(b: &T, c: &T, d: &T) -> T {
    b.clone() * d.clone() - (c.clone() - d.clone())
}

/// `1 + c − δ − b − bδ`, the quantity controlling the Dulac argument.
pub(crate) fn dulac_quantity<T: Num + Clone>(b: &T, c: &T, d: &T) -> T {
    T::one() + c.clone() - d.clone() - b.clone() - b.clone() * d.clone()
}

pub(crate) fn field_generic<T: Num + Clone>(b: &T, c: &T, d: &T, x: &T, y: &T) -> (T, T) {
    let one = T::one();
    let fx = x.clone() * (T::zero() - x.clone() * x.clone() + (one - b.clone()) * x.clone() - y.clone() + b.clone());
    let fy = y.clone() * ((c.clone() - d.clone()) * x.clone() - d.clone() * b.clone());
    (fx, fy)
}

/// The affine vector field at `pt`.
pub fn vector_field(p: &Params, pt: Point2) -> (f64, f64) {
    field_generic(&p.b(), &p.c(), &p.delta(), &pt.x, &pt.y)
}

/// Exact partial-derivative matrix of [`vector_field`].
pub fn jacobian(p: &Params, pt: Point2) -> Mat2 {
    let (b, c, d) = (p.b(), p.c(), p.delta());
    let Point2 { x, y } = pt;
    [
        [-3.0 * x * x + 2.0 * (1.0 - b) * x - y + b, -x],
        [y * (c - d), (c - d) * x - d * b],
    ]
}

pub fn discriminants(p: &Params) -> Discriminants {
    match p.exact() {
        Some(e) => {
            let (a, b) = e.discriminants();
            Discriminants {
                a: rational_to_f64(&a),
                b: rational_to_f64(&b),
            }
        }
        None => {
            let (b, c, d) = (p.b(), p.c(), p.delta());
            Discriminants {
                a: disc_a(&b, &c, &d),
                b: disc_b(&b, &c, &d),
            }
        }
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Location of the interior equilibrium `P2 = (bδ/(c−δ), −bc(δ+bδ−c)/(c−δ)²)`
/// when it lies in the open quadrant (`0 < bδ < c−δ`).
pub fn p2_location(p: &Params) -> Option<Point2> {
    let label = classify_case(p);
    if label.case < 3 {
        return None;
    }
    let (b, c, d) = (p.b(), p.c(), p.delta());
    let cmd = c - d;
    Some(Point2::new(b * d / cmd, -b * c * (d + b * d - c) / (cmd * cmd)))
}

/// Finite equilibria in the closed positive quadrant.
///
/// P0 and P1 are always present. P2 is reported only when it lies strictly
/// inside the open quadrant; at `bδ = c−δ` the coincident pair is a single
/// saddle-node at `(1, 0)`.
pub fn finite_singular_points(p: &Params) -> Vec<SingularPoint> {
    let label = classify_case(p);
    let p0 = Point2::new(0.0, 0.0);
    let p1 = Point2::new(1.0, 0.0);
    let mut out = vec![SingularPoint {
        name: PointName::P0,
        chart: Chart::U3,
        location: p0,
        kind: Kind::Saddle,
        eigenvalues: Some(eigenvalues(&jacobian(p, p0))),
    }];

    let p1_kind = match label.case {
        1 => Kind::StableNode,
        2 => Kind::SaddleNode,
        _ => Kind::Saddle,
    };
    let mut p1_eigs = eigenvalues(&jacobian(p, p1));
    if label.case == 2 {
        // the second eigenvalue is exactly zero on the boundary
        for e in p1_eigs.iter_mut() {
            if e.re.abs() <= BAND_EPS * (1.0 + p.b()) * 10.0 {
                *e = Complex64::new(0.0, 0.0);
            }
        }
    }
    out.push(SingularPoint {
        name: PointName::P1,
        chart: Chart::U3,
        location: p1,
        kind: p1_kind,
        eigenvalues: Some(p1_eigs),
    });

    if let Some(loc) = p2_location(p) {
        let kind = match label.case {
            3 => Kind::UnstableNode,
            4 => Kind::StableNode,
            5 => Kind::UnstableFocus,
            6 => Kind::StableFocus,
            _ => Kind::WeakStableFocus,
        };
        let mut eigs = eigenvalues(&jacobian(p, loc));
        if kind == Kind::WeakStableFocus {
            for e in eigs.iter_mut() {
                e.re = 0.0;
            }
        }
        out.push(SingularPoint {
            name: PointName::P2,
            chart: Chart::U3,
            location: loc,
            kind,
            eigenvalues: Some(eigs),
        });
    }
    out
}

/// Shared proptest strategies for parameter triples.
#[cfg(test)]
pub(crate) mod strategies {
    use super::Params;
    use proptest::prelude::*;

    pub fn params() -> impl Strategy<Value = Params> {
        (0.01f64..5.0, 0.01f64..5.0, 0.01f64..5.0).prop_map(|(b, c, d)| Params::new(b, c, d).unwrap())
    }

    /// Triples with an interior equilibrium: `bδ < c − δ`.
    pub fn interior_params() -> impl Strategy<Value = Params> {
        (0.1f64..5.0, 0.02f64..0.95, 0.02f64..0.98).prop_map(|(c, frac_d, frac_b)| {
            let d = c * frac_d;
            Params::new(frac_b * (c - d) / d, c, d).unwrap()
        })
    }
}
