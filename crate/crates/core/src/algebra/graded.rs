//! Polynomials in `u` and `v` stored by grade.
//!
//! The monomial `u^p v^q` is written `u^(p-q) z^q` with `z = uv`, so a
//! [`GradedPoly`] is a map from the integer grade `d = p - q` to a [`WPoly`]
//! in `z`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::Rational;
use super::wpoly::{lcm, WPoly};

#[derive(Clone, Debug, Default)]
pub struct GradedPoly {
    parts: BTreeMap<i64, WPoly>,
}

impl GradedPoly {
    pub fn zero() -> Self {
        GradedPoly::default()
    }

    pub fn one() -> Self {
        Self::from_wpoly(0, WPoly::one(1))
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_wpoly(0, WPoly::constant(1, c))
    }

    pub fn from_wpoly(grade: i64, p: WPoly) -> Self {
        let mut g = GradedPoly::zero();
        if !p.is_zero() {
            g.parts.insert(grade, p);
        }
        g
    }

    /// `c * u^p * v^q`.
    pub fn from_uv(p: i64, q: i64, c: impl Into<BigInt>) -> Self {
        Self::from_wpoly(p - q, WPoly::monomial(1, q, c))
    }

    /// Builds `sum c u^p v^q` from `(p, q, c)` triples.
    pub fn from_uv_terms(terms: impl IntoIterator<Item = (i64, i64, BigInt)>) -> Self {
        terms
            .into_iter()
            .fold(GradedPoly::zero(), |acc, (p, q, c)| &acc + &Self::from_uv(p, q, c))
    }

    /// Hodge polynomial `uv - g(u + v) + 1 - punctures` of a genus-`g` curve
    /// with `punctures` points removed.
    pub fn curve(genus: u32, punctures: i64) -> Self {
        let g = BigInt::from(genus);
        let mut out = &Self::from_uv(1, 1, 1) + &Self::constant(BigInt::one() - punctures);
        if !g.is_zero() {
            out = &out - &Self::from_uv(1, 0, g.clone());
            out = &out - &Self::from_uv(0, 1, g);
        }
        out
    }

    /// Embeds a polynomial in `z` alone.
    pub fn from_z(p: WPoly) -> Self {
        Self::from_wpoly(0, p)
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> impl DoubleEndedIterator<Item = (i64, &WPoly)> + '_ {
        self.parts.iter().map(|(d, p)| (*d, p))
    }

    pub fn part(&self, grade: i64) -> Option<&WPoly> {
        self.parts.get(&grade)
    }

    /// Least common multiple of the component scales.
    pub fn scale(&self) -> u64 {
        self.parts.values().fold(1, |t, p| lcm(t, p.scale()))
    }

    /// Every component at scale `t`, which must be a multiple of each
    /// component scale.
    pub fn rescaled(&self, t: u64) -> Self {
        GradedPoly {
            parts: self
                .parts
                .iter()
                .map(|(d, p)| (*d, p.rescaled(t).expect("common scale")))
                .collect(),
        }
    }

    /// Sets `u = 1`, leaving a polynomial in `z`.
    pub fn collapse(&self) -> WPoly {
        self.parts.values().fold(WPoly::zero(1), |acc, p| &acc + p)
    }

    /// The coefficient of `u^0 v^0`.
    pub fn constant_coefficient(&self) -> BigInt {
        self.parts.get(&0).map(|p| p.constant_term()).unwrap_or_default()
    }

    /// Value at `u = v = 1`, defined when all exponents are integral or not.
    pub fn eval_at_one(&self) -> BigInt {
        self.parts.values().map(|p| p.eval_at_one()).sum()
    }

    /// Substitutes `u -> 1/u, v -> 1/v`.
    pub fn reflect(&self) -> Self {
        GradedPoly { parts: self.parts.iter().map(|(d, p)| (-d, p.reflect())).collect() }
    }

    pub fn mul_wpoly(&self, p: &WPoly) -> Self {
        let mut out = GradedPoly::zero();
        for (d, q) in &self.parts {
            let r = q * p;
            if !r.is_zero() {
                out.parts.insert(*d, r);
            }
        }
        out
    }

    pub fn scalar_mul(&self, c: &BigInt) -> Self {
        self.mul_wpoly(&WPoly::constant(1, c.clone()))
    }

    /// Applies `f` to every component, dropping zero results.
    pub fn map_parts(&self, mut f: impl FnMut(&WPoly) -> WPoly) -> Self {
        let mut out = GradedPoly::zero();
        for (d, q) in &self.parts {
            let r = f(q);
            if !r.is_zero() {
                out.parts.insert(*d, r);
            }
        }
        out
    }

    /// Applies a fallible `f` to every component.
    pub fn try_map_parts(&self, mut f: impl FnMut(&WPoly) -> Option<WPoly>) -> Option<Self> {
        let mut out = GradedPoly::zero();
        for (d, q) in &self.parts {
            let r = f(q)?;
            if !r.is_zero() {
                out.parts.insert(*d, r);
            }
        }
        Some(out)
    }

    /// Terms `(exponent of u, exponent of v, coefficient)` sorted by
    /// `(z-exponent, grade)`.
    pub fn uv_terms(&self) -> Vec<(Rational, Rational, BigInt)> {
        let mut out: Vec<(Rational, i64, Rational, BigInt)> = Vec::new();
        for (d, p) in &self.parts {
            for (q, c) in p.z_terms() {
                let pu = &q + Rational::from_integer(BigInt::from(*d));
                out.push((q, *d, pu, c.clone()));
            }
        }
        out.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));
        out.into_iter().map(|(q, _, p, c)| (p, q, c)).collect()
    }

    /// Highest exponents of `u` and of `v` among the terms.
    pub fn uv_degrees(&self) -> Option<(Rational, Rational)> {
        let terms = self.uv_terms();
        let du = terms.iter().map(|t| t.0.clone()).max()?;
        let dv = terms.iter().map(|t| t.1.clone()).max()?;
        Some((du, dv))
    }

    pub fn all_coefficients_nonnegative(&self) -> bool {
        self.parts.values().all(|p| p.all_coefficients_nonnegative())
    }

    /// Whether `(-1)^grade * coefficient >= 0` for every term.
    pub fn sign_alternating_nonnegative(&self) -> bool {
        self.parts.iter().all(|(d, p)| {
            p.terms()
                .all(|(_, c)| if d.rem_euclid(2) == 0 { !c.is_negative() } else { !c.is_positive() })
        })
    }
}

impl PartialEq for GradedPoly {
    fn eq(&self, other: &Self) -> bool {
        self.parts == other.parts
    }
}

impl Eq for GradedPoly {}

impl<'a> Add<&'a GradedPoly> for &'a GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: &'a GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        for (d, p) in &rhs.parts {
            let sum = match out.parts.get(d) {
                Some(q) => q + p,
                None => p.clone(),
            };
            if sum.is_zero() {
                out.parts.remove(d);
            } else {
                out.parts.insert(*d, sum);
            }
        }
        out
    }
}

impl<'a> Sub<&'a GradedPoly> for &'a GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: &'a GradedPoly) -> GradedPoly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a GradedPoly> for &'a GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: &'a GradedPoly) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (da, pa) in &self.parts {
            for (db, pb) in &rhs.parts {
                out = &out + &GradedPoly::from_wpoly(da + db, pa * pb);
            }
        }
        out
    }
}

impl Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        GradedPoly { parts: self.parts.iter().map(|(d, p)| (*d, -p)).collect() }
    }
}

/// Formats as a sum of `c*u^p*v^q` terms sorted by `(z-exponent, grade)`.
impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.uv_terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (p, q, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let mut factors = Vec::new();
            for (var, e) in [("u", p), ("v", q)] {
                if e.is_zero() {
                    continue;
                }
                if e.is_one() {
                    factors.push(var.to_string());
                } else if e.is_integer() {
                    factors.push(format!("{var}^{e}"));
                } else {
                    factors.push(format!("{var}^({e})"));
                }
            }
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{abs}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}
