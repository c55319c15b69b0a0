//! Non-existence of periodic orbits with the Dulac multiplier `φ = 1/x`.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::model::{dulac_quantity, rational_to_f64, Params};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DulacConclusion {
    NoPeriodicOrbits,
    Inconclusive,
}

impl fmt::Display for DulacConclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DulacConclusion::NoPeriodicOrbits => "no-periodic-orbits",
            DulacConclusion::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DulacReport {
    pub applicable: bool,
    /// `1 + c − δ − b − bδ`, the supremum of `Δ` on the strip `0 < x ≤ 1`.
    pub value: f64,
    pub conclusion: DulacConclusion,
    b: f64,
    c: f64,
    delta: f64,
}

impl DulacReport {
    /// `Δ(x, y) = div(P/x, Q/x) = 1 + c − δ − 2x − b(δ + x)/x`.
    ///
    /// Independent of `y`; the argument is kept so callers can sample on a
    /// grid without special-casing.
    pub fn delta_at(&self, x: f64, _y: f64) -> f64 {
        1.0 + self.c - self.delta - 2.0 * x - self.b * (self.delta + x) / x
    }
}

/// On `x ≥ 1` the prey equation gives `ẋ < 0`, so a periodic orbit would
/// have to lie in `0 < x < 1`, where `Δ < 1 + c − δ − b − bδ`. The test is
/// evaluated exactly when the parameters carry rationals.
pub fn dulac_check(p: &Params) -> DulacReport {
    let (value, negative) = match p.exact() {
        Some(e) => {
            let v = dulac_quantity(&e.b, &e.c, &e.delta);
            (rational_to_f64(&v), num::Signed::is_negative(&v))
        }
        None => {
            let v = dulac_quantity(&p.b(), &p.c(), &p.delta());
            (v, v < 0.0)
        }
    };
    DulacReport {
        applicable: negative,
        value,
        conclusion: if negative {
            DulacConclusion::NoPeriodicOrbits
        } else {
            DulacConclusion::Inconclusive
        },
        b: p.b(),
        c: p.c(),
        delta: p.delta(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ExactParams;

    #[test]
    fn examples() {
        let r = dulac_check(&Params::from_exact(ExactParams::parse("2", "1", "1/5").unwrap()));
        assert!(r.applicable);
        assert_eq!(r.conclusion, DulacConclusion::NoPeriodicOrbits);
        assert!((r.value + 0.6).abs() < 1e-15);

        let r = dulac_check(&Params::new(0.5, 1.0, 0.25).unwrap());
        assert!(!r.applicable);
        assert_eq!(r.conclusion, DulacConclusion::Inconclusive);
        assert!((r.value - 1.125).abs() < 1e-15);
    }

    #[test]
    fn divergence_negative_on_strip() {
        let r = dulac_check(&Params::new(2.0, 1.0, 0.2).unwrap());
        for i in 1..=20 {
            for j in 0..10 {
                let x = i as f64 / 20.0;
                let y = j as f64 * 10.0 / 9.0;
                assert!(r.delta_at(x, y) < 0.0);
                assert!(r.delta_at(x, y) <= r.value);
            }
        }
    }

    #[test]
    fn delta_is_divergence_of_scaled_field() {
        let p = Params::new(0.7, 1.3, 0.4).unwrap();
        let r = dulac_check(&p);
        let h = 1e-6;
        let g = |x: f64, y: f64| {
            let (u, v) = crate::model::vector_field(&p, crate::model::Point2::new(x, y));
            (u / x, v / x)
        };
        let (x, y) = (0.37, 1.9);
        let div = (g(x + h, y).0 - g(x - h, y).0) / (2.0 * h) + (g(x, y + h).1 - g(x, y - h).1) / (2.0 * h);
        assert!((div - r.delta_at(x, y)).abs() < 1e-7);
    }
}
