use num::Num;
use serde::{Deserialize, Serialize};

use super::{Chart, ChartSystem, Poly, PolySystem};
use crate::error::{Error, Result};
use crate::local;
use crate::model::{eigenvalues, Params, Point2, PointName, SingularPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlowupStage {
    /// Direct substitution `u = v·w₁`.
    Raw,
    /// Raw field divided by `v`; orbit orientation flips where `v < 0`.
    Rescaled,
}

/// A blown-up field in the coordinates `(w₁, v)` (stored as `(x, y)`).
#[derive(Debug, Clone, PartialEq)]
pub struct BlowupSystem<T> {
    pub stage: BlowupStage,
    pub system: PolySystem<T>,
}

impl<T> BlowupSystem<T> {
    /// Whether the time rescaling preserves orbit orientation at height `v`.
    pub fn preserves_orientation(&self, v: f64) -> bool {
        match self.stage {
            BlowupStage::Raw => true,
            BlowupStage::Rescaled => v > 0.0,
        }
    }
}

/// Horizontal blow-up `u = v·w₁` of the origin of a U2-charted field:
///
/// ```text
/// ẇ₁ = (u̇(v w₁, v) − w₁ v̇(v w₁, v)) / v,   v̇ = v̇(v w₁, v)
/// ```
///
/// followed by division of both components by the common factor `v`.
pub fn blowup_horizontal<T: Num + Clone>(charted: &ChartSystem<T>) -> Result<(BlowupSystem<T>, BlowupSystem<T>)> {
    if charted.chart != Chart::U2 {
        return Err(Error::WrongChart(charted.chart));
    }
    let sys = &charted.system;
    let cap = sys.p.cap().max(sys.q.cap()) + 1;
    // u^i v^j ↦ w^i v^{i+j}
    let substitute = |poly: &Poly<T>| {
        let mut out = Poly::zero(2 * cap);
        for (i, j, c) in poly.terms() {
            out.add(i, i + j, c.clone());
        }
        out
    };
    let u_sub = substitute(&sys.p);
    let v_sub = substitute(&sys.q);

    let mut w_num = u_sub.clone();
    for (i, j, c) in v_sub.terms() {
        w_num.add(i + 1, j, T::zero() - c.clone());
    }
    let divide_by_v = |poly: &Poly<T>| -> Result<Poly<T>> {
        let mut out = Poly::zero(poly.cap());
        for (i, j, c) in poly.terms() {
            if j == 0 {
                return Err(Error::NotSemiHyperbolic(
                    "blow-up numerator has a term free of v; origin of U2 is not singular",
                ));
            }
            out.add(i, j - 1, c.clone());
        }
        Ok(out)
    };
    let raw = PolySystem::new(divide_by_v(&w_num)?, v_sub);
    let rescaled = PolySystem::new(divide_by_v(&raw.p)?, divide_by_v(&raw.q)?);
    Ok((
        BlowupSystem {
            stage: BlowupStage::Raw,
            system: raw,
        },
        BlowupSystem {
            stage: BlowupStage::Rescaled,
            system: rescaled,
        },
    ))
}

/// Result of the local analysis at the origin of the rescaled blow-up.
#[derive(Debug, Clone, PartialEq)]
pub struct BlowupOrigin {
    pub point: SingularPoint,
    /// Coefficients of `ẇ₁(w₁, 0)` in ascending powers of `w₁`
    /// (the flow along the exceptional divisor).
    pub divisor_flow: Vec<f64>,
    /// Coefficients of `v̇(0, v)` in ascending powers of `v`.
    pub axis_flow: Vec<f64>,
}

/// Classifies the origin of the rescaled blow-up and records the flow on
/// both axes.
pub fn classify_blowup_origin(rescaled: &BlowupSystem<f64>, _p: &Params) -> Result<BlowupOrigin> {
    let sys = &rescaled.system;
    let kind = local::classify_semihyperbolic(sys, Point2::new(0.0, 0.0))?;
    let j = sys.jacobian(0.0, 0.0);
    let cap = sys.p.cap().max(sys.q.cap());
    Ok(BlowupOrigin {
        point: SingularPoint {
            name: PointName::O2,
            chart: Chart::U2,
            location: Point2::new(0.0, 0.0),
            kind,
            eigenvalues: Some(eigenvalues(&j)),
        },
        divisor_flow: (0..=cap).map(|k| sys.p.get(k, 0)).collect(),
        axis_flow: (0..=cap).map(|k| sys.q.get(0, k)).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SectorKind {
    Hyperbolic,
    AttractingParabolic,
    RepellingParabolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Separatrix {
    /// The equator `v = 0` of chart U2.
    InfinityArc,
    /// The invariant line `x = 0` (`u = 0` in chart U2).
    YAxis,
}

/// Sector structure of O2 restricted to the positive quadrant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorData {
    pub kind: SectorKind,
    /// Boundary along which orbits enter the neighbourhood.
    pub incoming: Separatrix,
    /// Boundary along which orbits leave it.
    pub outgoing: Separatrix,
}

fn leading_sign(coeffs: &[f64]) -> f64 {
    coeffs.iter().find(|c| **c != 0.0).map_or(0.0, |c| c.signum())
}

/// Positive-quadrant sectors of O2 from the axis flows of the blow-up.
///
/// In the quadrant `w₁ > 0, v > 0` (where the rescaling keeps orientation)
/// the divisor `v = 0` stands for directions approaching O2 along the
/// equator and the axis `w₁ = 0` is the line `x = 0`.
pub fn o2_sector_data(origin: &BlowupOrigin) -> SectorData {
    let along_divisor = leading_sign(&origin.divisor_flow[1..]);
    let along_axis = leading_sign(&origin.axis_flow[1..]);
    let (kind, incoming, outgoing) = match (along_divisor < 0.0, along_axis > 0.0) {
        (true, true) => (SectorKind::Hyperbolic, Separatrix::InfinityArc, Separatrix::YAxis),
        (false, false) => (SectorKind::Hyperbolic, Separatrix::YAxis, Separatrix::InfinityArc),
        (true, false) => (
            SectorKind::AttractingParabolic,
            Separatrix::InfinityArc,
            Separatrix::YAxis,
        ),
        (false, true) => (
            SectorKind::RepellingParabolic,
            Separatrix::InfinityArc,
            Separatrix::YAxis,
        ),
    };
    SectorData {
        kind,
        incoming,
        outgoing,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compactify::{compactify, family_system};
    use crate::model::Kind;

    #[test]
    fn rejects_other_charts() {
        let s = family_system(&0.5, &1.0, &0.25);
        let u1 = compactify(&s, Chart::U1).unwrap();
        assert!(matches!(blowup_horizontal(&u1), Err(Error::WrongChart(Chart::U1))));
    }

    #[test]
    fn rescaled_times_v_is_raw() {
        let s = family_system(&0.7, &2.0, &0.3);
        let u2 = compactify(&s, Chart::U2).unwrap();
        let (raw, rescaled) = blowup_horizontal(&u2).unwrap();
        let times_v = |p: &Poly<f64>| Poly::from_terms(p.cap() + 1, p.terms().map(|(i, j, c)| (i, j + 1, *c)));
        assert!(times_v(&rescaled.system.p).same_as(&raw.system.p));
        assert!(times_v(&rescaled.system.q).same_as(&raw.system.q));
        assert!(!rescaled.preserves_orientation(-0.1));
        assert!(rescaled.preserves_orientation(0.1));
    }

    #[test]
    fn blowup_origin_is_saddle_node_with_oriented_axes() {
        for &(b, c, d) in &[(0.5, 1.0, 0.25), (2.0, 1.0, 0.2), (3.0, 0.5, 2.0)] {
            let p = Params::new(b, c, d).unwrap();
            let s = family_system(&b, &c, &d);
            let (_, rescaled) = blowup_horizontal(&compactify(&s, Chart::U2).unwrap()).unwrap();
            let o = classify_blowup_origin(&rescaled, &p).unwrap();
            assert_eq!(o.point.kind, Kind::SaddleNode);
            // ẇ₁ = −w₁ on v = 0
            assert_eq!(o.divisor_flow[..2], [0.0, -1.0]);
            assert!(o.divisor_flow[2..].iter().all(|c| *c == 0.0));
            // v̇ = bδ v² on w₁ = 0
            assert_eq!(o.axis_flow[..2], [0.0, 0.0]);
            assert!((o.axis_flow[2] - b * d).abs() < 1e-15);
        }
    }
}
