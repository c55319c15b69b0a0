use num::{BigRational, Num, ToPrimitive};

/// Dense bivariate polynomial: `coeffs[i][j]` multiplies `xⁱ yʲ`.
///
/// The table is square with side `cap + 1`; only entries with `i + j ≤ cap`
/// are ever non-zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<Vec<T>>,
}

impl<T: Num + Clone> Poly<T> {
    pub fn zero(cap: usize) -> Self {
        Self {
            coeffs: vec![vec![T::zero(); cap + 1]; cap + 1],
        }
    }

    /// Builds a polynomial from `(i, j, coefficient)` triples; repeated
    /// monomials accumulate.
    pub fn from_terms(cap: usize, terms: impl IntoIterator<Item = (usize, usize, T)>) -> Self {
        let mut p = Self::zero(cap);
        for (i, j, c) in terms {
            p.add(i, j, c);
        }
        p
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.coeffs
            .get(i)
            .and_then(|row| row.get(j))
            .cloned()
            .unwrap_or_else(T::zero)
    }

    pub fn add(&mut self, i: usize, j: usize, c: T) {
        assert!(i + j <= self.cap(), "monomial x^{i} y^{j} exceeds capacity");
        let slot = &mut self.coeffs[i][j];
        *slot = slot.clone() + c;
    }

    /// Non-zero monomials as `(i, j, coefficient)`, in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &T)> + '_ {
        self.coeffs.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(j, c)| (i, j, c))
        })
    }

    /// Maximum total degree of a non-zero monomial (`None` for the zero
    /// polynomial).
    pub fn degree(&self) -> Option<usize> {
        self.terms().map(|(i, j, _)| i + j).max()
    }

    pub fn is_zero(&self) -> bool {
        self.terms().next().is_none()
    }

    pub fn eval(&self, x: &T, y: &T) -> T {
        let mut acc = T::zero();
        let mut xp = T::one();
        for row in &self.coeffs {
            let mut yp = T::one();
            let mut row_acc = T::zero();
            for c in row {
                if !c.is_zero() {
                    row_acc = row_acc + c.clone() * yp.clone();
                }
                yp = yp * y.clone();
            }
            acc = acc + row_acc * xp.clone();
            xp = xp * x.clone();
        }
        acc
    }

    /// `∂^{dx+dy} / ∂x^{dx} ∂y^{dy}`.
    pub fn derivative(&self, dx: usize, dy: usize) -> Self {
        let mut out = Self::zero(self.cap());
        for (i, j, c) in self.terms() {
            if i < dx || j < dy {
                continue;
            }
            let mut k = c.clone();
            for f in (i - dx + 1)..=i {
                k = k * from_usize::<T>(f);
            }
            for f in (j - dy + 1)..=j {
                k = k * from_usize::<T>(f);
            }
            out.add(i - dx, j - dy, k);
        }
        out
    }

    /// Equality as polynomials, ignoring table capacity.
    pub fn same_as(&self, other: &Self) -> bool {
        let cap = self.cap().max(other.cap());
        (0..=cap).all(|i| (0..=cap - i).all(|j| self.get(i, j) == other.get(i, j)))
    }

    pub fn map<U: Num + Clone>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly {
            coeffs: self.coeffs.iter().map(|row| row.iter().map(&f).collect()).collect(),
        }
    }
}

pub(crate) fn from_usize<T: Num + Clone>(n: usize) -> T {
    let mut acc = T::zero();
    for _ in 0..n {
        acc = acc + T::one();
    }
    acc
}

impl Poly<BigRational> {
    pub fn to_f64(&self) -> Poly<f64> {
        self.map(|c| c.to_f64().unwrap_or(f64::NAN))
    }
}

impl<T: Num + Clone + std::fmt::Display> std::fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, j, c) in self.terms() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            match i {
                0 => {}
                1 => f.write_str("·u")?,
                _ => write!(f, "·u^{i}")?,
            }
            match j {
                0 => {}
                1 => f.write_str("·v")?,
                _ => write!(f, "·v^{j}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// A planar polynomial vector field `(ẋ, ẏ) = (P, Q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySystem<T> {
    pub p: Poly<T>,
    pub q: Poly<T>,
}

impl<T: Num + Clone> PolySystem<T> {
    pub fn new(p: Poly<T>, q: Poly<T>) -> Self {
        Self { p, q }
    }

    /// Degree of the system: the larger of the degrees of `P` and `Q`.
    pub fn degree(&self) -> usize {
        self.p.degree().unwrap_or(0).max(self.q.degree().unwrap_or(0))
    }

    pub fn eval(&self, x: &T, y: &T) -> (T, T) {
        (self.p.eval(x, y), self.q.eval(x, y))
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.p.same_as(&other.p) && self.q.same_as(&other.q)
    }

    pub fn map<U: Num + Clone>(&self, f: impl Fn(&T) -> U + Copy) -> PolySystem<U> {
        PolySystem {
            p: self.p.map(f),
            q: self.q.map(f),
        }
    }
}

impl PolySystem<f64> {
    /// Jacobian at `(x, y)`.
    pub fn jacobian(&self, x: f64, y: f64) -> crate::model::Mat2 {
        [
            [
                self.p.derivative(1, 0).eval(&x, &y),
                self.p.derivative(0, 1).eval(&x, &y),
            ],
            [
                self.q.derivative(1, 0).eval(&x, &y),
                self.q.derivative(0, 1).eval(&x, &y),
            ],
        ]
    }
}

impl PolySystem<BigRational> {
    pub fn to_f64(&self) -> PolySystem<f64> {
        PolySystem {
            p: self.p.to_f64(),
            q: self.q.to_f64(),
        }
    }
}

/// The predator-prey field `P = −x³ + (1−b)x² − xy + bx`,
/// `Q = (c−δ)xy − δb y` with coefficients in `T`.
pub fn family_system<T: Num + Clone>(b: &T, c: &T, delta: &T) -> PolySystem<T> {
    let one = T::one();
    let p = Poly::from_terms(
        3,
        [
            (3, 0, T::zero() - one.clone()),
            (2, 0, one.clone() - b.clone()),
            (1, 1, T::zero() - one),
            (1, 0, b.clone()),
        ],
    );
    let q = Poly::from_terms(
        3,
        [
            (1, 1, c.clone() - delta.clone()),
            (0, 1, T::zero() - delta.clone() * b.clone()),
        ],
    );
    PolySystem::new(p, q)
}

/// Real roots of `Σ coeffs[k] tᵏ`, ascending. Returns nothing for the zero
/// polynomial.
pub fn real_roots(coeffs: &[f64]) -> Vec<f64> {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return Vec::new();
    }
    let mut cs: Vec<f64> = coeffs.to_vec();
    while cs.len() > 1 && cs.last().is_some_and(|c| c.abs() <= 1e-14 * scale) {
        cs.pop();
    }
    let deg = cs.len() - 1;
    match deg {
        0 => Vec::new(),
        1 => vec![-cs[0] / cs[1] + 0.0],
        _ => {
            let eval = |t: f64| cs.iter().rev().fold(0.0, |acc, c| acc * t + c);
            let lead = cs[deg];
            let bound = 1.0 + cs[..deg].iter().fold(0.0f64, |m, c| m.max((c / lead).abs()));
            let dcs: Vec<f64> = cs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
            let mut knots = vec![-bound];
            knots.extend(real_roots(&dcs).into_iter().filter(|t| t.abs() < bound));
            knots.push(bound);
            let tol = 1e-13 * scale;
            let mut roots: Vec<f64> = Vec::new();
            for w in knots.windows(2) {
                let (mut lo, mut hi) = (w[0], w[1]);
                let (flo, fhi) = (eval(lo), eval(hi));
                if flo.abs() <= tol {
                    roots.push(lo);
                    continue;
                }
                if fhi.abs() <= tol || flo.signum() == fhi.signum() {
                    continue;
                }
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid == lo || mid == hi {
                        break;
                    }
                    if eval(mid).signum() == flo.signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                roots.push(0.5 * (lo + hi));
            }
            if let Some(&last) = knots.last() {
                if eval(last).abs() <= tol {
                    roots.push(last);
                }
            }
            roots.sort_by(|a, b| a.total_cmp(b));
            roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
            roots
        }
    }
}
