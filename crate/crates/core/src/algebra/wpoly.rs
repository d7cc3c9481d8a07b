//! Sparse Laurent polynomials in `z = uv` with rational exponents.
//!
//! A [`WPoly`] with scale `t` stores integer exponents in the auxiliary
//! variable `w = z^(1/t)`, so `z^(p/q)` is representable exactly when `q`
//! divides `t`. Arithmetic between polynomials of different scales lifts both
//! operands to the least common multiple; equality compares values, not
//! representations.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{scaled_exponent, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct WPoly {
    scale: u64,
    // sorted by exponent, no zero coefficients
    terms: Vec<(i64, BigInt)>,
}

impl WPoly {
    pub fn zero(scale: u64) -> Self {
        assert!(scale > 0, "exponent scale must be positive");
        WPoly { scale, terms: Vec::new() }
    }

    pub fn one(scale: u64) -> Self {
        Self::constant(scale, BigInt::one())
    }

    pub fn constant(scale: u64, c: impl Into<BigInt>) -> Self {
        Self::monomial(scale, 0, c)
    }

    /// `c * w^e`.
    pub fn monomial(scale: u64, e: i64, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(scale);
        let c = c.into();
        if !c.is_zero() {
            p.terms.push((e, c));
        }
        p
    }

    /// Builds a polynomial from `(w-exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms(scale: u64, terms: impl IntoIterator<Item = (i64, BigInt)>) -> Self {
        assert!(scale > 0, "exponent scale must be positive");
        WPoly { scale, terms: normalize(terms.into_iter().collect()) }
    }

    /// `c * z^exp`; fails when `exp` is not a multiple of `1/scale`.
    pub fn z_term(scale: u64, exp: &Rational, c: impl Into<BigInt>) -> Result<Self> {
        let e = scaled_exponent(exp, scale).ok_or_else(|| {
            Error::ScaleMismatch(format!("exponent {exp} is not a multiple of 1/{scale}"))
        })?;
        Ok(Self::monomial(scale, e, c))
    }

    /// `z^exp` at the smallest scale that represents it.
    pub fn z_pow(exp: &Rational) -> Self {
        let scale = super::rational::to_u64(exp.denom()).expect("exponent denominator too large");
        Self::z_term(scale, exp, 1).expect("denominator divides its own scale")
    }

    /// `z^exp - 1` at the smallest scale that represents it.
    pub fn z_binomial(exp: &Rational) -> Self {
        &Self::z_pow(exp) - &Self::one(1)
    }

    /// `sum_{j=0}^{count-1} z^(j * step)`, with `count <= 0` read through
    /// `(x^count - 1) / (x - 1)`, i.e. `0` for `count = 0` and
    /// `-sum_{j=count}^{-1} x^j` for negative counts.
    pub fn geometric(scale: u64, step: &Rational, count: i64) -> Result<Self> {
        let s = scaled_exponent(step, scale).ok_or_else(|| {
            Error::ScaleMismatch(format!("exponent {step} is not a multiple of 1/{scale}"))
        })?;
        let terms: Vec<(i64, BigInt)> = if count >= 0 {
            (0..count).map(|j| (j * s, BigInt::one())).collect()
        } else {
            (count..0).map(|j| (j * s, -BigInt::one())).collect()
        };
        Ok(WPoly { scale, terms: normalize(terms) })
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as `(w-exponent, coefficient)`, ascending.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// Terms as `(z-exponent, coefficient)`, ascending.
    pub fn z_terms(&self) -> impl Iterator<Item = (Rational, &BigInt)> + '_ {
        let t = BigInt::from(self.scale);
        self.terms
            .iter()
            .map(move |(e, c)| (Rational::new(BigInt::from(*e), t.clone()), c))
    }

    /// Coefficient of `w^e`.
    pub fn coeff(&self, e: i64) -> BigInt {
        match self.terms.binary_search_by_key(&e, |t| t.0) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    /// Coefficient of `z^exp` (zero when not representable at this scale).
    pub fn z_coeff(&self, exp: &Rational) -> BigInt {
        scaled_exponent(exp, self.scale).map(|e| self.coeff(e)).unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.last().map(|t| t.0)
    }

    /// Highest `z`-exponent, as a rational.
    pub fn z_degree(&self) -> Option<Rational> {
        self.max_exp()
            .map(|e| Rational::new(BigInt::from(e), BigInt::from(self.scale)))
    }

    pub fn all_coefficients_nonnegative(&self) -> bool {
        self.terms.iter().all(|(_, c)| !c.is_negative())
    }

    /// Value at `z = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    /// Value at an arbitrary rational `w` (so `z = w^scale`); `w` must be
    /// nonzero when negative exponents are present.
    pub fn eval_w(&self, w: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|(e, c)| Rational::from_integer(c.clone()) * pow_i64(w, *e))
            .sum()
    }

    /// Coefficient of `(w - 1)^k` in the Taylor expansion around `w = 1`.
    ///
    /// When `(w - 1)^k` divides the polynomial this equals the quotient
    /// evaluated at `w = 1`.
    pub fn taylor_at_one(&self, k: u32) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut falling = BigInt::one();
            for i in 0..k {
                falling *= BigInt::from(*e) - BigInt::from(i);
            }
            acc += c * falling;
        }
        let mut fact = BigInt::one();
        for i in 2..=k {
            fact *= BigInt::from(i);
        }
        debug_assert!((&acc % &fact).is_zero());
        acc / fact
    }

    /// The same value at scale `new_scale`, which must be a multiple of the
    /// current scale.
    pub fn rescaled(&self, new_scale: u64) -> Result<Self> {
        if new_scale % self.scale != 0 {
            return Err(Error::ScaleMismatch(format!(
                "cannot rescale from {} to {new_scale}",
                self.scale
            )));
        }
        let f = (new_scale / self.scale) as i64;
        Ok(WPoly {
            scale: new_scale,
            terms: self.terms.iter().map(|(e, c)| (e * f, c.clone())).collect(),
        })
    }

    fn lifted(&self, scale: u64) -> std::borrow::Cow<'_, WPoly> {
        if scale == self.scale {
            std::borrow::Cow::Borrowed(self)
        } else {
            std::borrow::Cow::Owned(self.rescaled(scale).expect("lift to a multiple"))
        }
    }

    /// Multiplies by `w^e`.
    pub fn shift(&self, e: i64) -> Self {
        WPoly {
            scale: self.scale,
            terms: self.terms.iter().map(|(k, c)| (k + e, c.clone())).collect(),
        }
    }

    /// Multiplies by `z^exp`.
    pub fn shift_z(&self, exp: &Rational) -> Self {
        let s = lcm(self.scale, super::rational::to_u64(exp.denom()).expect("scale"));
        let e = scaled_exponent(exp, s).expect("lcm scale");
        self.lifted(s).shift(e)
    }

    /// Substitutes `z -> z^{-1}`.
    pub fn reflect(&self) -> Self {
        WPoly {
            scale: self.scale,
            terms: self.terms.iter().rev().map(|(k, c)| (-k, c.clone())).collect(),
        }
    }

    pub fn scalar_mul(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.scale);
        }
        WPoly {
            scale: self.scale,
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Multiplies by `w^m - 1`.
    pub fn mul_binomial(&self, m: i64) -> Self {
        let up = self.terms.iter().map(|(e, c)| (e + m, c.clone()));
        let down = self.terms.iter().map(|(e, c)| (*e, -c));
        WPoly { scale: self.scale, terms: normalize(up.chain(down).collect()) }
    }

    /// Remainder classes of the exponents modulo `m`; the polynomial is
    /// divisible by `w^m - 1` iff every class sums to zero.
    pub fn divisible_by_binomial(&self, m: i64) -> bool {
        debug_assert!(m > 0);
        let mut folded: Vec<(i64, BigInt)> =
            self.terms.iter().map(|(e, c)| (e.rem_euclid(m), c.clone())).collect();
        folded.sort_by_key(|t| t.0);
        normalize_sorted(folded).is_empty()
    }

    /// Exact quotient by `w^m - 1` (`m > 0`), or `None` if it does not divide.
    pub fn div_binomial(&self, m: i64) -> Option<WPoly> {
        debug_assert!(m > 0);
        if self.is_zero() {
            return Some(WPoly::zero(self.scale));
        }
        // p = (w^m - 1) Q gives Q_e = -(p_e + p_{e-m} + p_{e-2m} + ...),
        // so Q is piecewise constant along each residue class.
        let mut classes: Vec<(i64, i64, &BigInt)> =
            self.terms.iter().map(|(e, c)| (e.rem_euclid(m), *e, c)).collect();
        classes.sort_by_key(|t| (t.0, t.1));
        let mut out = Vec::new();
        let mut i = 0;
        while i < classes.len() {
            let r = classes[i].0;
            let mut run = BigInt::zero();
            while i < classes.len() && classes[i].0 == r {
                let e = classes[i].1;
                run += classes[i].2;
                let next = if i + 1 < classes.len() && classes[i + 1].0 == r {
                    Some(classes[i + 1].1)
                } else {
                    None
                };
                match next {
                    Some(n) => {
                        if !run.is_zero() {
                            let mut k = e;
                            while k < n {
                                out.push((k, -run.clone()));
                                k += m;
                            }
                        }
                    }
                    None => {
                        if !run.is_zero() {
                            return None;
                        }
                    }
                }
                i += 1;
            }
        }
        out.sort_by_key(|t| t.0);
        Some(WPoly { scale: self.scale, terms: out })
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder (over the integers).
    pub fn div_exact(&self, divisor: &WPoly) -> Option<WPoly> {
        if divisor.is_zero() {
            return None;
        }
        let scale = lcm(self.scale, divisor.scale);
        let num = self.lifted(scale);
        let den = divisor.lifted(scale);
        if num.is_zero() {
            return Some(WPoly::zero(scale));
        }
        if den.terms.len() == 1 {
            let (de, dc) = &den.terms[0];
            let mut out = Vec::with_capacity(num.terms.len());
            for (e, c) in &num.terms {
                let (q, r) = c.div_rem(dc);
                if !r.is_zero() {
                    return None;
                }
                out.push((e - de, q));
            }
            return Some(WPoly { scale, terms: out });
        }
        if den.terms.len() == 2 && den.terms[0].1 == -BigInt::one() && den.terms[1].1.is_one() {
            let (lo, hi) = (den.terms[0].0, den.terms[1].0);
            return num.shift(-lo).div_binomial(hi - lo).map(|q| WPoly { scale, ..q });
        }
        let mut rem: std::collections::BTreeMap<i64, BigInt> = num.terms.iter().cloned().collect();
        let (dtop, dlead) = den.terms.last().unwrap();
        let dlow = den.terms[0].0;
        let lowest = num.min_exp().unwrap() - dlow;
        let mut quot = Vec::new();
        while let Some((&e, c)) = rem.iter().next_back() {
            let qe = e - dtop;
            if qe < lowest {
                return None;
            }
            let (qc, r) = c.div_rem(dlead);
            if !r.is_zero() {
                return None;
            }
            for (de, dc) in &den.terms {
                let key = de + qe;
                let entry = rem.entry(key).or_default();
                *entry -= &qc * dc;
                if entry.is_zero() {
                    rem.remove(&key);
                }
            }
            quot.push((qe, qc));
        }
        quot.reverse();
        Some(WPoly { scale, terms: quot })
    }

    pub fn pow(&self, n: u32) -> WPoly {
        let mut acc = WPoly::one(self.scale);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

fn normalize(mut terms: Vec<(i64, BigInt)>) -> Vec<(i64, BigInt)> {
    terms.sort_by_key(|t| t.0);
    normalize_sorted(terms)
}

fn normalize_sorted(terms: Vec<(i64, BigInt)>) -> Vec<(i64, BigInt)> {
    let mut out: Vec<(i64, BigInt)> = Vec::with_capacity(terms.len());
    for (e, c) in terms {
        match out.last_mut() {
            Some((le, lc)) if *le == e => *lc += c,
            _ => {
                if let Some((_, lc)) = out.last() {
                    if lc.is_zero() {
                        out.pop();
                    }
                }
                out.push((e, c));
            }
        }
    }
    if out.last().is_some_and(|(_, c)| c.is_zero()) {
        out.pop();
    }
    out
}

fn merge(a: &[(i64, BigInt)], b: &[(i64, BigInt)], negate_b: bool) -> Vec<(i64, BigInt)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
            out.push((b[j].0, c));
            j += 1;
        } else {
            let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
            if !c.is_zero() {
                out.push((a[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub(crate) fn pow_i64(w: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow::pow(w.clone(), e as usize)
    } else {
        num_traits::pow::pow(w.recip(), (-e) as usize)
    }
}

impl PartialEq for WPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.scale == other.scale {
            return self.terms == other.terms;
        }
        let s = lcm(self.scale, other.scale);
        self.lifted(s).terms == other.lifted(s).terms
    }
}

impl Eq for WPoly {}

impl<'a> Add<&'a WPoly> for &'a WPoly {
    type Output = WPoly;
    fn add(self, rhs: &'a WPoly) -> WPoly {
        let s = lcm(self.scale, rhs.scale);
        WPoly { scale: s, terms: merge(&self.lifted(s).terms, &rhs.lifted(s).terms, false) }
    }
}

impl<'a> Sub<&'a WPoly> for &'a WPoly {
    type Output = WPoly;
    fn sub(self, rhs: &'a WPoly) -> WPoly {
        let s = lcm(self.scale, rhs.scale);
        WPoly { scale: s, terms: merge(&self.lifted(s).terms, &rhs.lifted(s).terms, true) }
    }
}

impl<'a> Mul<&'a WPoly> for &'a WPoly {
    type Output = WPoly;
    fn mul(self, rhs: &'a WPoly) -> WPoly {
        let s = lcm(self.scale, rhs.scale);
        let (a, b) = (self.lifted(s), rhs.lifted(s));
        let mut prod = Vec::with_capacity(a.terms.len() * b.terms.len());
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                prod.push((ea + eb, ca * cb));
            }
        }
        WPoly { scale: s, terms: normalize(prod) }
    }
}

impl Neg for &WPoly {
    type Output = WPoly;
    fn neg(self) -> WPoly {
        WPoly {
            scale: self.scale,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<WPoly> for WPoly {
            type Output = WPoly;
            fn $m(self, rhs: WPoly) -> WPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a WPoly> for WPoly {
            type Output = WPoly;
            fn $m(self, rhs: &'a WPoly) -> WPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for WPoly {
    type Output = WPoly;
    fn neg(self) -> WPoly {
        -&self
    }
}

/// Formats as `1 + z^(3/5) - 2*z^2`, ascending in the exponent.
impl fmt::Display for WPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (exp, c)) in self.z_terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if exp.is_zero() {
                write!(f, "{abs}")?;
                continue;
            }
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            if exp.is_one() {
                f.write_str("z")?;
            } else if exp.is_integer() {
                write!(f, "z^{exp}")?;
            } else {
                write!(f, "z^({exp})")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn zp(n: i64, d: i64) -> WPoly {
        WPoly::z_pow(&rat(n, d))
    }

    #[test]
    fn a53_chain_product() {
        // (1 + z^(3/5) + z^(6/5)) (1 + z^(4/5)) - z^2
        let k2 = WPoly::geometric(5, &rat(3, 5), 3).unwrap();
        let k1 = WPoly::geometric(5, &rat(4, 5), 2).unwrap();
        let d2 = &(&k2 * &k1) - &zp(2, 1);
        assert_eq!(d2.to_string(), "1 + z^(3/5) + z^(4/5) + z^(6/5) + z^(7/5)");
        assert_eq!(d2.eval_at_one(), BigInt::from(5));
        assert_eq!(d2.scale(), 5);
    }

    #[test]
    fn mixed_scales_compare_by_value() {
        let a = zp(1, 2);
        let b = WPoly::z_term(6, &rat(1, 2), 1).unwrap();
        assert_eq!(a, b);
        assert_eq!((&a + &zp(1, 3)).scale(), 6);
    }

    #[test]
    fn exact_division() {
        // (z^2 - 1) / (z - 1) = z + 1
        let num = &zp(2, 1) - &WPoly::one(1);
        let den = &zp(1, 1) - &WPoly::one(1);
        assert_eq!(num.div_exact(&den).unwrap(), &zp(1, 1) + &WPoly::one(1));
        assert_eq!(num.div_binomial(1).unwrap(), &zp(1, 1) + &WPoly::one(1));
        // z^2 + 1 is not divisible by z - 1
        let bad = &zp(2, 1) + &WPoly::one(1);
        assert!(bad.div_exact(&den).is_none());
        assert!(bad.div_binomial(1).is_none());
        // 2z is not divisible by 3 over the integers
        assert!(WPoly::monomial(1, 1, 2).div_exact(&WPoly::constant(1, 3)).is_none());
    }

    #[test]
    fn laurent_division() {
        let den = &WPoly::monomial(1, -1, 1) + &WPoly::one(1); // w^-1 + 1
        let q = &WPoly::monomial(1, 3, 2) - &WPoly::monomial(1, -2, 1);
        let num = &den * &q;
        assert_eq!(num.div_exact(&den).unwrap(), q);
    }

    #[test]
    fn geometric_negative_count() {
        // (x^-1 - 1)/(x - 1) = -x^-1
        let g = WPoly::geometric(1, &rat(1, 1), -1).unwrap();
        assert_eq!(g, -WPoly::monomial(1, -1, 1));
        assert!(WPoly::geometric(1, &rat(1, 1), 0).unwrap().is_zero());
        // zero step: count copies of 1
        assert_eq!(WPoly::geometric(1, &rat(0, 1), 4).unwrap(), WPoly::constant(1, 4));
    }

    #[test]
    fn taylor_coefficients() {
        // w^2 - 2w + 1 = (w-1)^2
        let p = WPoly::from_terms(1, [(2, 1.into()), (1, (-2).into()), (0, 1.into())]);
        assert_eq!(p.taylor_at_one(0), BigInt::zero());
        assert_eq!(p.taylor_at_one(1), BigInt::zero());
        assert_eq!(p.taylor_at_one(2), BigInt::one());
        // w^-1 - 1 = -(w-1) + ...
        let q = &WPoly::monomial(1, -1, 1) - &WPoly::one(1);
        assert_eq!(q.taylor_at_one(1), BigInt::from(-1));
    }

    #[test]
    fn reflect_and_shift() {
        let p = &zp(3, 5) + &WPoly::constant(5, 2);
        assert_eq!(p.reflect(), &zp(-3, 5) + &WPoly::constant(5, 2));
        assert_eq!(p.shift_z(&rat(2, 1)), &zp(13, 5) + &WPoly::z_term(5, &rat(2, 1), 2).unwrap());
    }
}
