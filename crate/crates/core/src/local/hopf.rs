//! Hopf bifurcation of the interior equilibrium along the `b` axis.
//!
//! Two independent routes to the first Lyapunov coefficient: closed forms
//! in `(c, δ)` ([`hopf_analysis`]) and a from-scratch evaluation of the
//! Kuznetsov formula on the translated polynomial field
//! ([`lyapunov_procedural`]).

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::compactify::{family_system, PolySystem};
use crate::error::{Error, Result};
use crate::model::{disc_a, disc_b, Mat2, Point2};

type C2 = [Complex64; 2];

fn inner(p: &C2, q: &C2) -> Complex64 {
    p[0].conj() * q[0] + p[1].conj() * q[1]
}

/// Closed-form Hopf data for fixed `(c, δ)` with `b` as bifurcation
/// parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HopfData {
    pub c: f64,
    pub delta: f64,
    /// Critical value `b₀ = (c−δ)/(c+δ)`.
    pub b0: f64,
    /// `dμ/db (b₀) = −δ / (2(c−δ))`.
    pub dmu_db_at_b0: f64,
    /// `ω(b₀) = c √(δ(c−δ)/(c+δ)³)`.
    pub omega0: f64,
    /// `P2(b₀) = (δ/(c+δ), c²/(c+δ)²)`.
    pub equilibrium: Point2,
    pub g20: Complex64,
    pub g11: Complex64,
    pub g21: Complex64,
    pub ell1: f64,
    pub p_vec: C2,
    pub q_vec: C2,
}

impl HopfData {
    /// Real part of the eigenvalues at P2: `μ(b) = b A(b) / (2(c−δ)²)`.
    pub fn mu_at(&self, b: f64) -> f64 {
        let cmd = self.c - self.delta;
        b * disc_a(&b, &self.c, &self.delta) / (2.0 * cmd * cmd)
    }

    /// Imaginary part `ω(b) = b √(−δB(b)) / (2(c−δ)²)`; `None` when `B ≥ 0`
    /// (real eigenvalues).
    pub fn omega_at(&self, b: f64) -> Option<f64> {
        let bb = disc_b(&b, &self.c, &self.delta);
        if bb >= 0.0 {
            return None;
        }
        let cmd = self.c - self.delta;
        Some(b * (-self.delta * bb).sqrt() / (2.0 * cmd * cmd))
    }

    /// Supercritical when the first Lyapunov coefficient is negative.
    pub fn is_supercritical(&self) -> bool {
        self.ell1 < 0.0
    }
}

fn check_c_delta(c: f64, delta: f64) -> Result<()> {
    if !(c > 0.0 && delta > 0.0 && c.is_finite() && delta.is_finite()) {
        return Err(Error::InvalidParams {
            name: "c/delta",
            value: format!("({c}, {delta})"),
            reason: "must be positive and finite",
        });
    }
    if c <= delta {
        return Err(Error::HopfRequiresCGreaterDelta { c, delta });
    }
    Ok(())
}

/// Hopf data from the closed forms.
///
/// With `x₂ = δ/(c+δ)` and `q = (−x₂, iω)` the translated field gives
/// `g₂₀ = x₂² − δ(c−δ)/(c+δ) − iω`, `g₁₁ = x₂²`, `g₂₁ = −3x₂²`, hence
/// `ℓ₁ = −x₂²/ω < 0`.
pub fn hopf_analysis(c: f64, delta: f64) -> Result<HopfData> {
    check_c_delta(c, delta)?;
    let d = delta;
    let cpd = c + d;
    let cmd = c - d;
    let b0 = cmd / cpd;
    if disc_b(&b0, &c, &d) >= 0.0 {
        // cannot happen for c > δ: B(b₀) = −4c²(c−δ)³/(c+δ)
        return Err(Error::HopfRequiresCGreaterDelta { c, delta });
    }
    let x2 = d / cpd;
    let omega = c * (d * cmd / (cpd * cpd * cpd)).sqrt();
    let g20 = Complex64::new(x2 * x2 - d * cmd / cpd, -omega);
    let g11 = Complex64::new(x2 * x2, 0.0);
    let g21 = Complex64::new(-3.0 * x2 * x2, 0.0);
    let ell1 = -x2 * x2 / omega;
    Ok(HopfData {
        c,
        delta,
        b0,
        dmu_db_at_b0: -d / (2.0 * cmd),
        omega0: omega,
        equilibrium: Point2::new(x2, c * c / (cpd * cpd)),
        g20,
        g11,
        g21,
        ell1,
        p_vec: [
            Complex64::new(-cpd / (2.0 * d), 0.0),
            Complex64::new(0.0, omega * cpd.powi(3) / (2.0 * c * c * d * cmd)),
        ],
        q_vec: [Complex64::new(-x2, 0.0), Complex64::new(0.0, omega)],
    })
}

/// Symmetric multilinear forms of the quadratic and cubic parts of a
/// polynomial field at a point: `F(x₀ + ε) = Aε + ½B(ε, ε) + ⅙C(ε, ε, ε) + …`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultilinearForms {
    /// `hess[i][j][k] = ∂²Fᵢ/∂xⱼ∂xₖ`.
    pub hess: [[[f64; 2]; 2]; 2],
    /// `third[i][j][k][l] = ∂³Fᵢ/∂xⱼ∂xₖ∂xₗ`.
    pub third: [[[[f64; 2]; 2]; 2]; 2],
}

impl MultilinearForms {
    pub fn at(sys: &PolySystem<f64>, pt: Point2) -> Self {
        let comps = [&sys.p, &sys.q];
        let mut hess = [[[0.0; 2]; 2]; 2];
        let mut third = [[[[0.0; 2]; 2]; 2]; 2];
        for (i, f) in comps.iter().enumerate() {
            for j in 0..2 {
                for k in 0..2 {
                    let (dx, dy) = count_xy(&[j, k]);
                    hess[i][j][k] = f.derivative(dx, dy).eval(&pt.x, &pt.y);
                    for l in 0..2 {
                        let (dx, dy) = count_xy(&[j, k, l]);
                        third[i][j][k][l] = f.derivative(dx, dy).eval(&pt.x, &pt.y);
                    }
                }
            }
        }
        Self { hess, third }
    }

    pub fn bform(&self, u: &C2, v: &C2) -> C2 {
        let mut out = [Complex64::new(0.0, 0.0); 2];
        for (i, o) in out.iter_mut().enumerate() {
            for j in 0..2 {
                for k in 0..2 {
                    *o += self.hess[i][j][k] * u[j] * v[k];
                }
            }
        }
        out
    }

    pub fn cform(&self, u: &C2, v: &C2, w: &C2) -> C2 {
        let mut out = [Complex64::new(0.0, 0.0); 2];
        for (i, o) in out.iter_mut().enumerate() {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        *o += self.third[i][j][k][l] * u[j] * v[k] * w[l];
                    }
                }
            }
        }
        out
    }
}

fn count_xy(idx: &[usize]) -> (usize, usize) {
    let dx = idx.iter().filter(|&&i| i == 0).count();
    (dx, idx.len() - dx)
}

/// Intermediate values of the procedural computation.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm {
    pub b0: f64,
    pub equilibrium: Point2,
    pub jacobian: Mat2,
    pub omega: f64,
    pub q: C2,
    pub p: C2,
    pub g20: Complex64,
    pub g11: Complex64,
    pub g21: Complex64,
    pub ell1: f64,
    /// `‖Aq − iωq‖ / ‖q‖`.
    pub residual: f64,
}

/// Evaluates the Lyapunov coefficient from the polynomial field itself:
/// translated Jacobian, eigenvectors `Aq = iωq`, `Aᵀp = −iωp` with
/// `⟨p, q⟩ = 1`, multilinear forms, then
/// `ℓ₁ = Re(i g₂₀ g₁₁ + ω g₂₁) / (2ω²)`.
///
/// `q` is scaled as `(A₀₁, iω − A₀₀)` with its first component made real and
/// negative.
pub fn procedural_normal_form(c: f64, delta: f64) -> Result<NormalForm> {
    check_c_delta(c, delta)?;
    let b0 = (c - delta) / (c + delta);
    let cmd = c - delta;
    let x2 = b0 * delta / cmd;
    let eq = Point2::new(x2, -x2 * x2 + (1.0 - b0) * x2 + b0);
    let sys = family_system(&b0, &c, &delta);
    let a = sys.jacobian(eq.x, eq.y);
    let tr = a[0][0] + a[1][1];
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let w2 = det - 0.25 * tr * tr;
    if w2 <= 0.0 {
        return Err(Error::IllConditioned(w2.abs()));
    }
    let omega = w2.sqrt();
    let i = Complex64::i();

    let mut q = if a[0][1] != 0.0 {
        [Complex64::new(a[0][1], 0.0), i * omega - a[0][0]]
    } else {
        [i * omega - a[1][1], Complex64::new(a[1][0], 0.0)]
    };
    // fix the phase: first non-zero component real and negative
    let lead = if q[0].norm() > 0.0 { q[0] } else { q[1] };
    let phase = -lead.conj() / lead.norm();
    q = [q[0] * phase, q[1] * phase];

    let mut p = if a[1][0] != 0.0 {
        [Complex64::new(a[1][0], 0.0), -(a[0][0] + i * omega)]
    } else {
        [-(a[1][1] + i * omega), Complex64::new(a[0][1], 0.0)]
    };
    let s = inner(&p, &q);
    p = [p[0] / s.conj(), p[1] / s.conj()];

    let aq = [a[0][0] * q[0] + a[0][1] * q[1], a[1][0] * q[0] + a[1][1] * q[1]];
    let qn = (q[0].norm_sqr() + q[1].norm_sqr()).sqrt();
    let residual = ((aq[0] - i * omega * q[0]).norm_sqr() + (aq[1] - i * omega * q[1]).norm_sqr()).sqrt() / qn;
    if residual > 1e-10 {
        return Err(Error::IllConditioned(residual));
    }

    let forms = MultilinearForms::at(&sys, eq);
    let qb = [q[0].conj(), q[1].conj()];
    let g20 = inner(&p, &forms.bform(&q, &q));
    let g11 = inner(&p, &forms.bform(&q, &qb));
    let g21 = inner(&p, &forms.cform(&q, &q, &qb));
    let ell1 = (i * g20 * g11 + omega * g21).re / (2.0 * omega * omega);
    Ok(NormalForm {
        b0,
        equilibrium: eq,
        jacobian: a,
        omega,
        q,
        p,
        g20,
        g11,
        g21,
        ell1,
        residual,
    })
}

pub fn lyapunov_procedural(c: f64, delta: f64) -> Result<f64> {
    procedural_normal_form(c, delta).map(|nf| nf.ell1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_pair() {
        let h = hopf_analysis(1.0, 0.25).unwrap();
        assert!((h.b0 - 0.6).abs() < 1e-15);
        assert!((h.dmu_db_at_b0 + 1.0 / 6.0).abs() < 1e-15);
        // ω² = c²δ(c−δ)/(c+δ)³ = 0.096
        assert!((h.omega0 - 0.096f64.sqrt()).abs() < 1e-15);
        assert!((h.omega_at(h.b0).unwrap() - h.omega0).abs() < 1e-14);
        // ℓ₁ = −x₂²/ω with x₂ = 0.2
        assert!((h.ell1 + 0.04 / 0.096f64.sqrt()).abs() < 1e-14);
        assert_eq!(h.equilibrium, Point2::new(0.2, 0.64));
        assert!(h.mu_at(h.b0).abs() < 1e-15);
    }

    #[test]
    fn procedural_agrees_with_closed_form() {
        for &(c, d) in &[(1.0, 0.25), (2.0, 0.5), (5.0, 4.9), (0.3, 0.01)] {
            let h = hopf_analysis(c, d).unwrap();
            let nf = procedural_normal_form(c, d).unwrap();
            assert!(((nf.ell1 - h.ell1) / h.ell1).abs() <= 1e-8, "{c} {d}");
            assert!(nf.ell1 < 0.0);
            assert!((nf.omega - h.omega0).abs() <= 1e-12 * h.omega0);
            for k in 0..2 {
                assert!((nf.q[k] - h.q_vec[k]).norm() <= 1e-12);
                assert!((nf.p[k] - h.p_vec[k]).norm() <= 1e-9 * h.p_vec[k].norm().max(1.0));
            }
            assert!((nf.g20 - h.g20).norm() <= 1e-10 * h.g20.norm());
            assert!((nf.g11 - h.g11).norm() <= 1e-10 * h.g11.norm());
            assert!((nf.g21 - h.g21).norm() <= 1e-10 * h.g21.norm());
            let pq = inner(&h.p_vec, &h.q_vec);
            assert!((pq.re - 1.0).abs() <= 1e-12 && pq.im.abs() <= 1e-12);
        }
    }

    #[test]
    fn eigenvector_residual() {
        let nf = procedural_normal_form(1.0, 0.25).unwrap();
        assert!(nf.residual <= 1e-12);
    }

    #[test]
    fn rejects_c_not_above_delta() {
        assert!(matches!(
            hopf_analysis(1.0, 1.0),
            Err(Error::HopfRequiresCGreaterDelta { .. })
        ));
        assert!(lyapunov_procedural(0.5, 1.0).is_err());
    }

    #[test]
    fn forms_are_symmetric() {
        let sys = family_system(&0.6, &1.0, &0.25);
        let f = MultilinearForms::at(&sys, Point2::new(0.2, 0.64));
        let u = [Complex64::new(0.3, -1.0), Complex64::new(2.0, 0.5)];
        let v = [Complex64::new(-1.2, 0.1), Complex64::new(0.0, 0.7)];
        let w = [Complex64::new(0.4, 0.4), Complex64::new(-0.9, 0.0)];
        let close = |a: C2, b: C2| (a[0] - b[0]).norm() + (a[1] - b[1]).norm() < 1e-14;
        assert!(close(f.bform(&u, &v), f.bform(&v, &u)));
        assert!(close(f.cform(&u, &v, &w), f.cform(&w, &u, &v)));
        assert!(close(f.cform(&u, &v, &w), f.cform(&v, &w, &u)));
        // B(ε,η)₁ = −2x₂ε₁η₁ − ε₁η₂ − ε₂η₁ at b₀
        let b = f.bform(&u, &v);
        let want = -0.4 * u[0] * v[0] - u[0] * v[1] - u[1] * v[0];
        assert!((b[0] - want).norm() < 1e-14);
        // C(ε,η,ζ)₁ = −6 ε₁η₁ζ₁, second component 0
        let cc = f.cform(&u, &v, &w);
        assert!((cc[0] + 6.0 * u[0] * v[0] * w[0]).norm() < 1e-13 && cc[1].norm() < 1e-15);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(300))]

            #[test]
            fn mu_changes_sign_across_b0(c in 0.05f64..5.0, frac in 0.02f64..0.98) {
                let h = hopf_analysis(c, c * frac).unwrap();
                let step = 1e-3 * h.b0;
                prop_assert!(h.mu_at(h.b0).abs() <= 1e-12);
                prop_assert!(h.mu_at(h.b0 - step) > 0.0);
                prop_assert!(h.mu_at(h.b0 + step) < 0.0);
                prop_assert!(h.is_supercritical());
            }
        }
    }
}
