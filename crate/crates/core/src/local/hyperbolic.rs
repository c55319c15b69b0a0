use crate::compactify::PolySystem;
use crate::error::{Error, Result};
use crate::model::{eigenvalues, Kind, Mat2, Point2};

/// Relative width of the band in which an eigenvalue (or its real part) is
/// treated as zero.
pub const ZERO_BAND: f64 = 1e-10;

fn mat_norm(m: &Mat2) -> f64 {
    m.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()))
}

/// Type of a hyperbolic equilibrium from the eigenvalues of its Jacobian.
pub fn classify_hyperbolic(j: &Mat2) -> Result<Kind> {
    let band = ZERO_BAND * mat_norm(j);
    let [l1, l2] = eigenvalues(j);
    for l in [l1, l2] {
        if l.re.abs() <= band {
            return Err(Error::NonHyperbolic { re: l.re });
        }
    }
    Ok(if l1.im != 0.0 {
        if l1.re > 0.0 {
            Kind::UnstableFocus
        } else {
            Kind::StableFocus
        }
    } else if l1.re > 0.0 && l2.re > 0.0 {
        Kind::UnstableNode
    } else if l1.re < 0.0 && l2.re < 0.0 {
        Kind::StableNode
    } else {
        Kind::Saddle
    })
}

fn hessian_form(sys: &PolySystem<f64>, pt: Point2, e: [f64; 2]) -> [f64; 2] {
    let (x, y) = (pt.x, pt.y);
    let quad = |p: &crate::compactify::Poly<f64>| {
        let xx = p.derivative(2, 0).eval(&x, &y);
        let xy = p.derivative(1, 1).eval(&x, &y);
        let yy = p.derivative(0, 2).eval(&x, &y);
        xx * e[0] * e[0] + 2.0 * xy * e[0] * e[1] + yy * e[1] * e[1]
    };
    [quad(&sys.p), quad(&sys.q)]
}

/// Semi-hyperbolic equilibrium (exactly one zero eigenvalue) classified
/// from the second-order term of the flow on its centre manifold.
///
/// In eigen-coordinates `(s, h)` with `s` along the kernel of the Jacobian,
/// the centre manifold is `h = O(s²)`, so the reduced flow is
/// `ṡ = a₂ s² + O(s³)` with `a₂ = ½ ⟨w, D²F[e, e]⟩` (`e` the right and `w` the
/// left null vector, `⟨w, e⟩ = 1`). A non-zero `a₂` gives a saddle-node.
pub fn classify_semihyperbolic(sys: &PolySystem<f64>, pt: Point2) -> Result<Kind> {
    let j = sys.jacobian(pt.x, pt.y);
    let norm = mat_norm(&j);
    if norm == 0.0 {
        return Err(Error::NotSemiHyperbolic("linear part vanishes"));
    }
    let band = ZERO_BAND * norm;
    let [l1, l2] = eigenvalues(&j);
    let zeros = [l1, l2].iter().filter(|l| l.norm() <= band).count();
    if zeros != 1 {
        return Err(Error::NotSemiHyperbolic("need exactly one zero eigenvalue"));
    }
    // right null vector from the dominant row, left from the dominant column
    let r = if j[0][0].hypot(j[0][1]) >= j[1][0].hypot(j[1][1]) {
        0
    } else {
        1
    };
    let mut e = [-j[r][1], j[r][0]];
    let en = e[0].hypot(e[1]);
    e = [e[0] / en, e[1] / en];
    let k = if j[0][0].hypot(j[1][0]) >= j[0][1].hypot(j[1][1]) {
        0
    } else {
        1
    };
    let mut w = [-j[1][k], j[0][k]];
    let we = w[0] * e[0] + w[1] * e[1];
    w = [w[0] / we, w[1] / we];

    let h = hessian_form(sys, pt, e);
    let a2 = 0.5 * (w[0] * h[0] + w[1] * h[1]);
    let scale = 1.0 + w[0].hypot(w[1]) * h[0].hypot(h[1]).max(norm);
    if a2.abs() <= ZERO_BAND * scale {
        return Err(Error::NeedsHigherOrder);
    }
    Ok(Kind::SaddleNode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compactify::{family_system, Poly};

    #[test]
    fn hyperbolic_kinds() {
        assert_eq!(classify_hyperbolic(&[[0.5, 0.0], [0.0, -0.125]]).unwrap(), Kind::Saddle);
        assert_eq!(
            classify_hyperbolic(&[[-1.0, 0.0], [0.0, -2.0]]).unwrap(),
            Kind::StableNode
        );
        assert_eq!(
            classify_hyperbolic(&[[1.0, 0.0], [0.0, 1.0]]).unwrap(),
            Kind::UnstableNode
        );
        // eigenvalues 0.01 ± 0.5 i
        assert_eq!(
            classify_hyperbolic(&[[0.01, -0.5], [0.5, 0.01]]).unwrap(),
            Kind::UnstableFocus
        );
        assert_eq!(
            classify_hyperbolic(&[[-0.01, -0.5], [0.5, -0.01]]).unwrap(),
            Kind::StableFocus
        );
    }

    #[test]
    fn non_hyperbolic_is_rejected() {
        assert!(matches!(
            classify_hyperbolic(&[[0.0, -1.0], [1.0, 0.0]]),
            Err(Error::NonHyperbolic { .. })
        ));
        assert!(classify_hyperbolic(&[[1.0, 0.0], [0.0, 1e-12]]).is_err());
        assert!(classify_hyperbolic(&[[0.0, 0.0], [0.0, 0.0]]).is_err());
    }

    #[test]
    fn normal_form_saddle_node() {
        // ẋ = x², ẏ = −y
        let s = PolySystem::new(Poly::from_terms(2, [(2, 0, 1.0)]), Poly::from_terms(2, [(0, 1, -1.0)]));
        assert_eq!(
            classify_semihyperbolic(&s, Point2::new(0.0, 0.0)).unwrap(),
            Kind::SaddleNode
        );
    }

    #[test]
    fn cubic_needs_higher_order() {
        // ẋ = x³, ẏ = −y
        let s = PolySystem::new(Poly::from_terms(3, [(3, 0, 1.0)]), Poly::from_terms(3, [(0, 1, -1.0)]));
        assert!(matches!(
            classify_semihyperbolic(&s, Point2::new(0.0, 0.0)),
            Err(Error::NeedsHigherOrder)
        ));
    }

    #[test]
    fn family_coincident_point() {
        let s = family_system(&1.0, &3.0, &1.5);
        assert_eq!(
            classify_semihyperbolic(&s, Point2::new(1.0, 0.0)).unwrap(),
            Kind::SaddleNode
        );
        // hyperbolic points are refused
        assert!(classify_semihyperbolic(&s, Point2::new(0.0, 0.0)).is_err());
    }

    mod properties {
        use crate::model::{classify_case, finite_singular_points, Kind, Params, PointName};
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]

            #[test]
            fn p1_is_saddle_node_on_case_2_surface(c in 0.1f64..5.0, frac in 0.05f64..0.95) {
                let d = c * frac;
                let p = Params::new((c - d) / d, c, d).unwrap();
                prop_assume!(classify_case(&p).case == 2);
                let p1 = finite_singular_points(&p).into_iter().find(|s| s.name == PointName::P1).unwrap();
                prop_assert_eq!(p1.kind, Kind::SaddleNode);
            }
        }
    }
}
