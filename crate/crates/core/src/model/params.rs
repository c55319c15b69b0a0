use num::{BigInt, BigRational, Signed, Zero};

use super::{disc_a, disc_b, field_generic, rational_to_f64};
use crate::error::{Error, Result};

/// The parameter triple `(b, c, δ)`, all strictly positive.
///
/// A triple built from rationals keeps its exact value next to the `f64`
/// one; classification then runs in exact arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    b: f64,
    c: f64,
    delta: f64,
    exact: Option<ExactParams>,
}

fn check(name: &'static str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::InvalidParams {
            name,
            value: v.to_string(),
            reason: "must be finite",
        });
    }
    if v <= 0.0 {
        return Err(Error::InvalidParams {
            name,
            value: v.to_string(),
            reason: "must be positive",
        });
    }
    Ok(())
}

impl Params {
    pub fn new(b: f64, c: f64, delta: f64) -> Result<Self> {
        check("b", b)?;
        check("c", c)?;
        check("delta", delta)?;
        Ok(Self {
            b,
            c,
            delta,
            exact: None,
        })
    }

    pub fn from_exact(e: ExactParams) -> Self {
        Self {
            b: rational_to_f64(&e.b),
            c: rational_to_f64(&e.c),
            delta: rational_to_f64(&e.delta),
            exact: Some(e),
        }
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn exact(&self) -> Option<&ExactParams> {
        self.exact.as_ref()
    }

    /// Same triple with the exact representation dropped.
    pub fn to_float(&self) -> Self {
        Self {
            exact: None,
            ..self.clone()
        }
    }

    /// Same triple with `b` replaced (exactness is dropped).
    pub fn with_b(&self, b: f64) -> Result<Self> {
        Self::new(b, self.c, self.delta)
    }
}

impl std::fmt::Display for Params {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.exact {
            Some(e) => write!(f, "(b, c, delta) = ({}, {}, {})", e.b, e.c, e.delta),
            None => write!(f, "(b, c, delta) = ({}, {}, {})", self.b, self.c, self.delta),
        }
    }
}

/// Exact rational parameter triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactParams {
    pub b: BigRational,
    pub c: BigRational,
    pub delta: BigRational,
}

/// Parses `"3/10"`, `"7"`, `"0.25"` or `"1.5e-3"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let digits = if digits == "-" || digits == "+" || digits.is_empty() {
        return None;
    } else {
        digits
    };
    let n: BigInt = digits.parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Some(if scale >= 0 {
        BigRational::from_integer(n * num::pow(ten, scale as usize))
    } else {
        BigRational::new(n, num::pow(ten, (-scale) as usize))
    })
}

impl ExactParams {
    pub fn new(b: BigRational, c: BigRational, delta: BigRational) -> Result<Self> {
        for (name, v) in [("b", &b), ("c", &c), ("delta", &delta)] {
            if !v.is_positive() {
                return Err(Error::InvalidParams {
                    name,
                    value: v.to_string(),
                    reason: "must be positive",
                });
            }
        }
        Ok(Self { b, c, delta })
    }

    pub fn parse(b: &str, c: &str, delta: &str) -> Result<Self> {
        let get = |name: &'static str, s: &str| {
            parse_rational(s).ok_or_else(|| Error::InvalidParams {
                name,
                value: s.to_string(),
                reason: "not a rational number",
            })
        };
        Self::new(get("b", b)?, get("c", c)?, get("delta", delta)?)
    }

    /// Exact `(A, B)`.
    pub fn discriminants(&self) -> (BigRational, BigRational) {
        (
            disc_a(&self.b, &self.c, &self.delta),
            disc_b(&self.b, &self.c, &self.delta),
        )
    }

    pub fn vector_field(&self, x: &BigRational, y: &BigRational) -> (BigRational, BigRational) {
        field_generic(&self.b, &self.c, &self.delta, x, y)
    }

    /// Exact location of P2 when `0 < bδ < c−δ`.
    pub fn p2(&self) -> Option<(BigRational, BigRational)> {
        let cmd = &self.c - &self.delta;
        let bd = &self.b * &self.delta;
        if !(bd < cmd) {
            return None;
        }
        let x = &bd / &cmd;
        let y = -(&self.b * &self.c * (&self.delta + &bd - &self.c)) / (&cmd * &cmd);
        Some((x, y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_positive() {
        assert!(Params::new(-1.0, 1.0, 1.0).is_err());
        assert!(Params::new(1.0, 0.0, 1.0).is_err());
        assert!(Params::new(1.0, 1.0, f64::NAN).is_err());
        assert!(ExactParams::parse("0", "1", "1").is_err());
        assert!(ExactParams::parse("1", "-1/2", "1").is_err());
    }

    #[test]
    fn parses_rationals() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(parse_rational("3/10"), Some(r(3, 10)));
        assert_eq!(parse_rational("0.25"), Some(r(1, 4)));
        assert_eq!(parse_rational(".5"), Some(r(1, 2)));
        assert_eq!(parse_rational("2"), Some(r(2, 1)));
        assert_eq!(parse_rational("1.5e-3"), Some(r(3, 2000)));
        assert_eq!(parse_rational("-0.1"), Some(r(-1, 10)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational(""), None);
    }

    #[test]
    fn exact_round_trips_to_float() {
        let p = Params::from_exact(ExactParams::parse("3/10", "1", "1/4").unwrap());
        assert_eq!(p.b(), 0.3);
        assert_eq!(p.delta(), 0.25);
        assert!(p.exact().is_some());
        assert!(p.to_float().exact().is_none());
    }
}
