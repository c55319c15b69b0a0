//! Uniqueness of the limit cycle for Liénard-like systems.
//!
//! With `f(x) = −x² + (1−b)x + b` and `g(x) = (c−δ)x` the family reads
//! `ẋ = x(f(x) − y)`, `ẏ = y(g(x) − λ)`, `λ = bδ`. Uniqueness follows from:
//! (i) `g(0) = 0` and `g′ > 0`; (ii) `a = (1−b)/2 > 0`, the top of `f`;
//! (iii) the equilibrium abscissa `x* = λ/(c−δ)` lies left of `a`;
//! (iv) `d/dx [x f′(x)/(g(x) − λ)] < 0` where defined.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{p1_gap, Params};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniquenessConditions {
    pub i: bool,
    pub ii: bool,
    pub iii: bool,
    pub iv: bool,
}

impl UniquenessConditions {
    pub fn all(&self) -> bool {
        self.i && self.ii && self.iii && self.iv
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniquenessReport {
    /// `[b, 1−b, −1]`, constant term first.
    pub f_coeffs: [f64; 3],
    pub g_slope: f64,
    pub a: f64,
    pub lambda: f64,
    pub x_star: f64,
    pub x_bar_star: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub conditions_hold: UniquenessConditions,
}

impl UniquenessReport {
    /// `h(x) = x f′(x) / (g(x) − λ)`.
    pub fn h(&self, x: f64) -> f64 {
        let fp = self.f_coeffs[1] + 2.0 * self.f_coeffs[2] * x;
        x * fp / (self.g_slope * x - self.lambda)
    }

    /// `h′(x) = N(x)/(g(x) − λ)²` with
    /// `N(x) = −2(c−δ)x² + 4λx − λ(1−b)`.
    pub fn h_prime(&self, x: f64) -> f64 {
        let den = self.g_slope * x - self.lambda;
        self.numerator(x) / (den * den)
    }

    pub fn numerator(&self, x: f64) -> f64 {
        -2.0 * self.g_slope * x * x + 4.0 * self.lambda * x - self.lambda * self.f_coeffs[1]
    }
}

/// Instantiates and checks the four conditions. Requires `0 < bδ < c−δ`.
///
/// Condition (iv) is checked through the numerator `N`: a downward parabola
/// with discriminant `8λ(2λ − (c−δ)(1−b))`, which is negative exactly when
/// `A > 0`.
pub fn uniqueness_check(p: &Params) -> Result<UniquenessReport> {
    let (b, c, d) = (p.b(), p.c(), p.delta());
    let cmd = c - d;
    let lambda = b * d;
    let has_interior = match p.exact() {
        Some(e) => num::Signed::is_negative(&p1_gap(&e.b, &e.c, &e.delta)),
        None => p1_gap(&b, &c, &d) < 0.0,
    };
    if !has_interior {
        return Err(Error::NoInteriorEquilibrium);
    }
    let a = (1.0 - b) / 2.0;
    let x_star = lambda / cmd;
    let disc = 8.0 * lambda * (2.0 * lambda - cmd * (1.0 - b));
    let conditions = UniquenessConditions {
        i: cmd > 0.0,
        ii: a > 0.0,
        iii: x_star < a,
        iv: disc < 0.0,
    };
    Ok(UniquenessReport {
        f_coeffs: [b, 1.0 - b, -1.0],
        g_slope: cmd,
        a,
        lambda,
        x_star,
        x_bar_star: 1.0 - b * c / cmd,
        k: 1.0,
        conditions_hold: conditions,
    })
}
