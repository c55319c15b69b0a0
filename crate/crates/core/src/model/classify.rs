use std::cmp::Ordering;

use num::{BigRational, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{disc_a, disc_b, dulac_quantity, p1_gap, ExactParams, Params};

/// Relative width of the zero band used by float-mode classification.
pub const BAND_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    I,
    #[serde(rename = "II-a")]
    IIa,
    #[serde(rename = "II-b")]
    IIb,
    III,
    S1,
    S2,
    S3,
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Region::I => "I",
            Region::IIa => "II-a",
            Region::IIb => "II-b",
            Region::III => "III",
            Region::S1 => "S1",
            Region::S2 => "S2",
            Region::S3 => "S3",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Portrait {
    A,
    B,
    C,
}

impl std::fmt::Display for Portrait {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Proven,
    Conjectured,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Proven => "proven",
            Status::Conjectured => "conjectured",
        })
    }
}

/// Which case boundary the parameters sit on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    /// `bδ = c−δ`: P1 and P2 coincide.
    Case2Boundary,
    /// `A = 0`: weak focus.
    AZero,
    /// `B = 0`: repeated eigenvalue at P2.
    BZero,
}

impl std::fmt::Display for Boundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Boundary::Case2Boundary => "case2-boundary",
            Boundary::AZero => "A-zero",
            Boundary::BZero => "B-zero",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    Exact,
    Float,
}

/// Case (1–7), boundary tag, parameter region and global portrait.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CaseLabel {
    pub case: u8,
    pub boundary: Option<Boundary>,
    pub region: Region,
    pub portrait: Portrait,
    pub status: Status,
    pub arithmetic: Arithmetic,
}

impl CaseLabel {
    /// Case 4 (`B ≥ 0`, `A < 0`): the sign of B alone would suggest portrait
    /// B while the case analysis gives a stable node at P2 and portrait C.
    pub fn in_discrepancy_zone(&self) -> bool {
        self.case == 4
    }

    /// Cases 4, 6, 7 where the absence of cycles is only conjectured.
    pub fn is_conjectured_region(&self) -> bool {
        self.status == Status::Conjectured
    }
}

impl std::fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "case {}", self.case)?;
        if let Some(b) = self.boundary {
            write!(f, " [{b}]")?;
        }
        write!(
            f,
            ", region {}, portrait {} ({})",
            self.region, self.portrait, self.status
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Signs {
    gap: Ordering,
    a: Ordering,
    b: Ordering,
    dulac: Ordering,
}

fn label_from_signs(s: Signs, arithmetic: Arithmetic) -> CaseLabel {
    use Ordering::*;
    let mk = |case, boundary, region, portrait, status| CaseLabel {
        case,
        boundary,
        region,
        portrait,
        status,
        arithmetic,
    };
    match s.gap {
        Greater => mk(1, None, Region::I, Portrait::A, Status::Proven),
        Equal => mk(
            2,
            Some(Boundary::Case2Boundary),
            Region::S1,
            Portrait::A,
            Status::Proven,
        ),
        Less => {
            let b_zero = (s.b == Equal).then_some(Boundary::BZero);
            match s.a {
                Greater => {
                    let case = if s.b == Less { 5 } else { 3 };
                    mk(case, b_zero, Region::III, Portrait::B, Status::Proven)
                }
                // A = 0 forces B < 0
                Equal => mk(7, Some(Boundary::AZero), Region::S3, Portrait::C, Status::Conjectured),
                Less => {
                    let case = if s.b == Less { 6 } else { 4 };
                    let (region, status) = match s.dulac {
                        Less => (Region::IIa, Status::Proven),
                        Equal => (Region::S2, Status::Conjectured),
                        Greater => (Region::IIb, Status::Conjectured),
                    };
                    mk(case, b_zero, region, Portrait::C, status)
                }
            }
        }
    }
}

fn sign_exact(q: &BigRational) -> Ordering {
    if q.is_zero() {
        Ordering::Equal
    } else if q.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

fn sign_banded(q: f64, scale: f64) -> Ordering {
    if q.abs() <= BAND_EPS * scale {
        Ordering::Equal
    } else if q > 0.0 {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Float-mode quantities paired with the magnitude of their terms.
#[derive(Debug, Clone, Copy)]
pub(crate) struct BandedQuantities {
    pub gap: (f64, f64),
    pub a: (f64, f64),
    pub b: (f64, f64),
    pub dulac: (f64, f64),
}

impl BandedQuantities {
    pub fn of(p: &Params) -> Self {
        let (b, c, d) = (p.b(), p.c(), p.delta());
        let x_abs = d * (b + 1.0) + c * (b + 1.0);
        let cpd = c + d;
        Self {
            gap: (p1_gap(&b, &c, &d), b * d + c + d),
            a: (disc_a(&b, &c, &d), d * c + d * d + b * d * c + b * d * d),
            b: (
                disc_b(&b, &c, &d),
                d * x_abs * x_abs + 4.0 * c * cpd * cpd * (c + d * (b + 1.0)),
            ),
            dulac: (dulac_quantity(&b, &c, &d), 1.0 + c + d + b + b * d),
        }
    }
}

/// Classification in double precision with a relative zero band.
pub fn classify_case_float(p: &Params) -> CaseLabel {
    let q = BandedQuantities::of(p);
    let s = Signs {
        gap: sign_banded(q.gap.0, q.gap.1),
        a: sign_banded(q.a.0, q.a.1),
        b: sign_banded(q.b.0, q.b.1),
        dulac: sign_banded(q.dulac.0, q.dulac.1),
    };
    label_from_signs(s, Arithmetic::Float)
}

/// Classification in exact rational arithmetic.
pub fn classify_case_exact(e: &ExactParams) -> CaseLabel {
    let (b, c, d) = (&e.b, &e.c, &e.delta);
    let s = Signs {
        gap: sign_exact(&p1_gap(b, c, d)),
        a: sign_exact(&disc_a(b, c, d)),
        b: sign_exact(&disc_b(b, c, d)),
        dulac: sign_exact(&dulac_quantity(b, c, d)),
    };
    label_from_signs(s, Arithmetic::Exact)
}

/// Exact classification when the triple carries rationals, float otherwise.
pub fn classify_case(p: &Params) -> CaseLabel {
    match p.exact() {
        Some(e) => classify_case_exact(e),
        None => classify_case_float(p),
    }
}
