//! Rational functions `N(u, v) / prod_j (z^(b_j) - 1)` with `z = uv`.
//!
//! Denominator factors are kept as a sorted multiset of positive exponents and
//! are never multiplied into the numerator except when two fractions are added
//! and a factor is missing from one side. [`EFraction::reduce`] cancels every
//! factor that divides all graded components of the numerator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::graded::GradedPoly;
use super::rational::{common_denominator, scaled_exponent, Rational};
use super::wpoly::{lcm, pow_i64, WPoly};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct EFraction {
    num: GradedPoly,
    den: Vec<Rational>,
}

impl EFraction {
    pub fn zero() -> Self {
        Self::from_poly(GradedPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(GradedPoly::one())
    }

    pub fn from_poly(num: GradedPoly) -> Self {
        EFraction { num, den: Vec::new() }
    }

    pub fn from_z(p: WPoly) -> Self {
        Self::from_poly(GradedPoly::from_z(p))
    }

    /// `num / prod (z^b - 1)`; every `b` must be positive.
    pub fn new(num: GradedPoly, mut den: Vec<Rational>) -> Result<Self> {
        if let Some(b) = den.iter().find(|b| !b.is_positive()) {
            return Err(Error::Parse(format!("denominator exponent {b} must be positive")));
        }
        den.sort();
        if num.is_zero() {
            den.clear();
        }
        Ok(EFraction { num, den })
    }

    /// `(z - 1) / (z^a - 1)`, rewriting negative `a` through
    /// `1 / (z^-b - 1) = -z^b / (z^b - 1)`.
    pub fn discrepancy_factor(a: &Rational) -> Result<Self> {
        Ok(Self::from_z(WPoly::z_binomial(&Rational::one())).over_binomial(a)?)
    }

    /// Divides by `z^b - 1` for any nonzero `b`.
    pub fn over_binomial(&self, b: &Rational) -> Result<Self> {
        if b.is_zero() {
            return Err(Error::ZeroDiscrepancyFactor);
        }
        if b.is_positive() {
            let mut den = self.den.clone();
            insert_sorted(&mut den, b.clone());
            return Ok(EFraction { num: self.num.clone(), den });
        }
        let pos = -b;
        let shift = -WPoly::z_pow(&pos);
        let mut den = self.den.clone();
        insert_sorted(&mut den, pos);
        Ok(EFraction { num: self.num.mul_wpoly(&shift), den })
    }

    pub fn numerator(&self) -> &GradedPoly {
        &self.num
    }

    pub fn denominator(&self) -> &[Rational] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Common scale `t` of numerator exponents and denominator exponents.
    pub fn scale(&self) -> u64 {
        lcm(self.num.scale(), common_denominator(&self.den))
    }

    /// The numerator when the denominator is empty.
    pub fn as_polynomial(&self) -> Option<&GradedPoly> {
        self.den.is_empty().then_some(&self.num)
    }

    /// Whether the value is a polynomial; reduces first.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty() || self.reduce().den.is_empty()
    }

    pub fn scalar_mul(&self, c: &BigInt) -> Self {
        let mut out = EFraction { num: self.num.scalar_mul(c), den: self.den.clone() };
        if out.num.is_zero() {
            out.den.clear();
        }
        out
    }

    pub fn mul_poly(&self, p: &GradedPoly) -> Self {
        let num = &self.num * p;
        let den = if num.is_zero() { Vec::new() } else { self.den.clone() };
        EFraction { num, den }
    }

    pub fn mul_wpoly(&self, p: &WPoly) -> Self {
        let num = self.num.mul_wpoly(p);
        let den = if num.is_zero() { Vec::new() } else { self.den.clone() };
        EFraction { num, den }
    }

    /// Canonical form: removes each factor `z^b - 1` that exactly divides every
    /// graded component, repeating until none does.
    pub fn reduce(&self) -> Self {
        if self.num.is_zero() {
            return EFraction::zero();
        }
        if self.den.is_empty() {
            return self.clone();
        }
        let t = self.scale();
        let mut num = self.num.rescaled(t);
        let mut kept = Vec::with_capacity(self.den.len());
        for b in &self.den {
            let m = scaled_exponent(b, t).expect("common scale");
            match num.try_map_parts(|p| p.div_binomial(m)) {
                Some(q) => num = q,
                None => kept.push(b.clone()),
            }
        }
        EFraction { num, den: kept }
    }

    /// `(uv)^2 f(1/u, 1/v)` in canonical form.
    pub fn dualize(&self) -> Self {
        let mut num = self.num.reflect().mul_wpoly(&WPoly::monomial(1, 2, 1));
        for b in &self.den {
            num = num.mul_wpoly(&-WPoly::z_pow(b));
        }
        EFraction { num, den: self.den.clone() }.reduce()
    }

    /// The limit at `u = v = 1`.
    ///
    /// With `w = z^(1/t)` the denominator is `prod (w^(m_j) - 1)`, which
    /// vanishes to order `k` (the number of factors) at `w = 1` with leading
    /// coefficient `prod m_j`. The numerator (after setting `u = 1`) must
    /// vanish to the same order.
    pub fn limit_at_one(&self) -> Result<Rational> {
        let t = self.scale();
        let n = self.num.collapse().rescaled(t)?;
        let k = self.den.len() as u32;
        for i in 0..k {
            if !n.taylor_at_one(i).is_zero() {
                return Err(Error::PoleAtOne);
            }
        }
        let lead: BigInt = self
            .den
            .iter()
            .map(|b| BigInt::from(scaled_exponent(b, t).expect("common scale")))
            .product();
        Ok(Rational::new(n.taylor_at_one(k), lead))
    }

    /// Highest exponents of `u` and `v` as a rational function: the numerator
    /// degrees minus the total denominator degree.
    pub fn uv_degrees(&self) -> Option<(Rational, Rational)> {
        let (du, dv) = self.num.uv_degrees()?;
        let total: Rational = self.den.iter().cloned().sum();
        Some((du - &total, dv - total))
    }

    /// Value at `u` and `z = s^big_t`; `big_t` must be a multiple of
    /// [`EFraction::scale`]. Returns `None` at a zero of the denominator.
    pub fn eval(&self, u: &Rational, s: &Rational, big_t: u64) -> Option<Rational> {
        assert!(big_t % self.scale() == 0, "evaluation scale must be a multiple of the scale");
        let mut den = Rational::one();
        for b in &self.den {
            let m = scaled_exponent(b, big_t).expect("scale");
            den *= pow_i64(s, m) - Rational::one();
        }
        if den.is_zero() {
            return None;
        }
        let mut val = Rational::zero();
        for (d, p) in self.num.parts() {
            let p = p.rescaled(big_t).expect("scale");
            val += pow_i64(u, d) * p.eval_w(s);
        }
        Some(val / den)
    }

    /// Terms of the reduced numerator as `(u-exponent, v-exponent, coef)`,
    /// sorted by `(z-exponent, grade)`.
    pub fn numerator_terms(&self) -> Vec<(Rational, Rational, BigInt)> {
        self.num.uv_terms()
    }

    /// LaTeX rendering with `z` written as `(uv)`.
    pub fn to_latex(&self) -> String {
        let mut out = String::new();
        let parts: Vec<_> = self
            .num
            .parts()
            .flat_map(|(d, p)| p.z_terms().map(move |(q, c)| (q, d, c.clone())).collect::<Vec<_>>())
            .collect();
        let mut parts = parts;
        parts.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));
        if parts.is_empty() {
            out.push('0');
        }
        for (i, (q, d, c)) in parts.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let abs = c.abs();
            let mut body = String::new();
            if *d != 0 {
                body.push_str(&latex_power("u", &Rational::from_integer(BigInt::from(*d))));
            }
            if !q.is_zero() {
                body.push_str(&latex_power("(uv)", q));
            }
            if body.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&abs.to_string());
                }
                out.push_str(&body);
            }
        }
        if self.den.is_empty() {
            return out;
        }
        let den: Vec<String> =
            self.den.iter().map(|b| format!("({} - 1)", latex_power("(uv)", b))).collect();
        format!("\\frac{{{out}}}{{{}}}", den.join(""))
    }
}

fn latex_power(base: &str, e: &Rational) -> String {
    if e.is_one() {
        base.to_string()
    } else if e.is_integer() {
        format!("{base}^{{{e}}}")
    } else {
        let sign = if e.is_negative() { "-" } else { "" };
        format!("{base}^{{{sign}\\frac{{{}}}{{{}}}}}", e.numer().abs(), e.denom())
    }
}

fn insert_sorted(v: &mut Vec<Rational>, b: Rational) {
    let pos = v.partition_point(|x| *x <= b);
    v.insert(pos, b);
}

/// Multiset difference `a - b` for sorted inputs.
fn multiset_minus(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = Vec::new();
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j < b.len() && b[j] == *x {
            j += 1;
        } else {
            out.push(x.clone());
        }
    }
    out
}

fn times_binomials(num: &GradedPoly, factors: &[Rational]) -> GradedPoly {
    factors
        .iter()
        .fold(num.clone(), |acc, b| acc.mul_wpoly(&WPoly::z_binomial(b)))
}

impl PartialEq for EFraction {
    fn eq(&self, other: &Self) -> bool {
        let only_self = multiset_minus(&self.den, &other.den);
        let only_other = multiset_minus(&other.den, &self.den);
        times_binomials(&self.num, &only_other) == times_binomials(&other.num, &only_self)
    }
}

impl Eq for EFraction {}

impl<'a> Add<&'a EFraction> for &'a EFraction {
    type Output = EFraction;
    fn add(self, rhs: &'a EFraction) -> EFraction {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let only_self = multiset_minus(&self.den, &rhs.den);
        let only_rhs = multiset_minus(&rhs.den, &self.den);
        let num = &times_binomials(&self.num, &only_rhs) + &times_binomials(&rhs.num, &only_self);
        if num.is_zero() {
            return EFraction::zero();
        }
        let mut den = self.den.clone();
        for b in only_rhs {
            insert_sorted(&mut den, b);
        }
        EFraction { num, den }
    }
}

impl<'a> Sub<&'a EFraction> for &'a EFraction {
    type Output = EFraction;
    fn sub(self, rhs: &'a EFraction) -> EFraction {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a EFraction> for &'a EFraction {
    type Output = EFraction;
    fn mul(self, rhs: &'a EFraction) -> EFraction {
        let num = &self.num * &rhs.num;
        if num.is_zero() {
            return EFraction::zero();
        }
        let mut den = self.den.clone();
        for b in &rhs.den {
            insert_sorted(&mut den, b.clone());
        }
        EFraction { num, den }
    }
}

impl Neg for &EFraction {
    type Output = EFraction;
    fn neg(self) -> EFraction {
        EFraction { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for EFraction {
    type Output = EFraction;
    fn neg(self) -> EFraction {
        -&self
    }
}

impl std::iter::Sum for EFraction {
    fn sum<I: Iterator<Item = EFraction>>(iter: I) -> EFraction {
        iter.fold(EFraction::zero(), |acc, x| (&acc + &x).reduce())
    }
}

impl fmt::Display for EFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({}) / (", self.num)?;
        for (i, b) in self.den.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            if b.is_one() {
                f.write_str("(uv - 1)")?;
            } else {
                write!(f, "((uv)^({b}) - 1)")?;
            }
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    fn zb(n: i64, d: i64) -> WPoly {
        WPoly::z_binomial(&rat(n, d))
    }

    #[test]
    fn reduce_cancels_factor() {
        let f = EFraction::new(GradedPoly::from_z(zb(1, 1)), vec![int(1)]).unwrap();
        let r = f.reduce();
        assert!(r.denominator().is_empty());
        assert_eq!(r.numerator(), &GradedPoly::one());

        let g = EFraction::new(GradedPoly::from_z(zb(2, 1)), vec![int(1)]).unwrap().reduce();
        assert_eq!(
            g.as_polynomial().unwrap(),
            &GradedPoly::from_z(&WPoly::z_pow(&int(1)) + &WPoly::one(1))
        );
    }

    #[test]
    fn limits() {
        let f = EFraction::new(GradedPoly::from_z(zb(1, 1)), vec![int(1)]).unwrap();
        assert_eq!(f.limit_at_one().unwrap(), int(1));
        let g = EFraction::new(GradedPoly::from_z(zb(1, 2)), vec![int(1)]).unwrap();
        assert_eq!(g.limit_at_one().unwrap(), rat(1, 2));
        assert_eq!(g.reduce().limit_at_one().unwrap(), rat(1, 2));
        let pole = EFraction::new(GradedPoly::one(), vec![int(1)]).unwrap();
        assert_eq!(pole.limit_at_one(), Err(Error::PoleAtOne));
    }

    #[test]
    fn negative_factor_rewrite() {
        // (z - 1)/(z^-1 - 1) = -z
        let f = EFraction::discrepancy_factor(&int(-1)).unwrap().reduce();
        assert_eq!(f.as_polynomial().unwrap(), &GradedPoly::from_z(-WPoly::z_pow(&int(1))));
        assert_eq!(EFraction::discrepancy_factor(&int(0)), Err(Error::ZeroDiscrepancyFactor));
    }

    #[test]
    fn dualize_examples() {
        let one = EFraction::one().dualize();
        assert_eq!(one.as_polynomial().unwrap(), &GradedPoly::from_uv(2, 2, 1));
        let p2 = EFraction::from_poly(GradedPoly::from_uv_terms([
            (0, 0, 1.into()),
            (1, 1, 1.into()),
            (2, 2, 1.into()),
        ]));
        assert_eq!(p2.dualize(), p2);
        // (z - 1)/(z^(1/2) - 1) = 1 + z^(1/2) is not self-dual
        let h = EFraction::discrepancy_factor(&rat(1, 2)).unwrap();
        assert_ne!(h.dualize(), h);
        assert_eq!(h.dualize().dualize(), h);
    }

    #[test]
    fn value_equality_across_forms() {
        let a = EFraction::discrepancy_factor(&rat(1, 3)).unwrap();
        let b = a.reduce();
        assert_eq!(a, b);
        assert!(b.denominator().is_empty());
        let sum = &a + &a;
        assert_eq!(sum, b.scalar_mul(&BigInt::from(2)));
    }

    #[test]
    fn degrees_of_rational_function() {
        let f = EFraction::discrepancy_factor(&rat(3, 5)).unwrap();
        assert_eq!(f.uv_degrees(), Some((rat(2, 5), rat(2, 5))));
    }

    #[test]
    fn latex_rendering() {
        let f = EFraction::from_z(&WPoly::one(1) + &WPoly::z_pow(&rat(3, 5)));
        assert_eq!(f.to_latex(), "1 + (uv)^{\\frac{3}{5}}");
    }
}
