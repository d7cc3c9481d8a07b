//! Arbitrary-precision rationals.
//!
//! [`Rational`] is `num_rational::BigRational`, which is always stored in
//! lowest terms with a positive denominator. Its `Display` already prints the
//! reduced `p/q` form (or `p` when `q = 1`) used by every text and JSON output.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// `n / d` as a reduced rational. Panics on `d = 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Least common multiple of the denominators of `values`, together with 1.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> u64 {
    values.into_iter().fold(1u64, |t, v| {
        let d = to_u64(v.denom()).expect("exponent scale does not fit in 64 bits");
        t.checked_mul(d / t.gcd(&d)).expect("exponent scale does not fit in 64 bits")
    })
}

/// `gcd(a, b)`, avoiding bignum arithmetic when both fit in a machine word.
pub(crate) fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    match (num_traits::ToPrimitive::to_i64(a), num_traits::ToPrimitive::to_i64(b)) {
        (Some(x), Some(y)) => BigInt::from(x.unsigned_abs().gcd(&y.unsigned_abs())),
        _ => a.gcd(b),
    }
}

// Operators that cancel through the word-size `gcd` and build the result
// without a further reduction; they agree with the `Rational` operators.

pub(crate) fn q_new(n: BigInt, d: BigInt) -> Rational {
    assert!(!d.is_zero(), "zero denominator");
    let g = gcd(&n, &d);
    let (n, d) = (n / &g, d / g);
    if d.is_negative() {
        Rational::new_raw(-n, -d)
    } else {
        Rational::new_raw(n, d)
    }
}

pub(crate) fn q_mul(a: &Rational, b: &Rational) -> Rational {
    if a.is_zero() || b.is_zero() {
        return Rational::zero();
    }
    let g1 = gcd(a.numer(), b.denom());
    let g2 = gcd(b.numer(), a.denom());
    Rational::new_raw((a.numer() / &g1) * (b.numer() / &g2), (a.denom() / &g2) * (b.denom() / &g1))
}

pub(crate) fn q_div(a: &Rational, b: &Rational) -> Rational {
    assert!(!b.is_zero(), "division by zero");
    let inv = if b.is_negative() {
        Rational::new_raw(-b.denom(), -b.numer())
    } else {
        Rational::new_raw(b.denom().clone(), b.numer().clone())
    };
    q_mul(a, &inv)
}

pub(crate) fn q_add(a: &Rational, b: &Rational) -> Rational {
    let g = gcd(a.denom(), b.denom());
    let (ad, bd) = (a.denom() / &g, b.denom() / &g);
    let t = a.numer() * &bd + b.numer() * &ad;
    if t.is_zero() {
        return Rational::zero();
    }
    let g2 = gcd(&t, &g);
    Rational::new_raw(t / &g2, ad * (b.denom() / g2))
}

pub(crate) fn q_sub(a: &Rational, b: &Rational) -> Rational {
    q_add(a, &Rational::new_raw(-b.numer(), b.denom().clone()))
}

/// `value * scale` when it is an integer.
pub fn scaled_exponent(value: &Rational, scale: u64) -> Option<i64> {
    let d = to_u64(value.denom())?;
    if scale % d != 0 {
        return None;
    }
    to_i64(value.numer())?.checked_mul(i64::try_from(scale / d).ok()?)
}

pub(crate) fn to_i64(n: &BigInt) -> Option<i64> {
    num_traits::ToPrimitive::to_i64(n)
}

pub(crate) fn to_u64(n: &BigInt) -> Option<u64> {
    if n.is_negative() {
        None
    } else {
        num_traits::ToPrimitive::to_u64(n)
    }
}

/// Serde helpers for rationals carried as `"p/q"` strings.
pub mod serde_str {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::super::Rational;
        use serde::ser::SerializeSeq;
        use serde::Serializer;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for x in v {
                seq.serialize_element(&x.to_string())?;
            }
            seq.end()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_is_reduced() {
        assert_eq!(rat(6, 4).to_string(), "3/2");
        assert_eq!(rat(-4, 2).to_string(), "-2");
        assert_eq!(rat(3, -5).to_string(), "-3/5");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "7", "-3/5", "12/7"] {
            assert_eq!(parse_rational(s).unwrap().to_string(), s);
        }
        assert_eq!(parse_rational("4/6").unwrap(), rat(2, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn scale_helpers() {
        assert_eq!(common_denominator(&[rat(4, 5), rat(3, 5), int(1)]), 5);
        assert_eq!(common_denominator(&[rat(1, 6), rat(3, 4)]), 12);
        assert_eq!(scaled_exponent(&rat(3, 5), 10), Some(6));
        assert_eq!(scaled_exponent(&rat(1, 3), 10), None);
    }

    #[test]
    fn fast_operators_agree() {
        let vals: Vec<Rational> = [(0, 1), (1, 1), (-3, 4), (6, 35), (-10, 21), (7, 2), (1, 12), (-1, 1)]
            .iter()
            .map(|&(n, d)| rat(n, d))
            .chain([Rational::new(BigInt::from(3).pow(50), BigInt::from(2).pow(70))])
            .collect();
        // compare representations, since equality of ratios is by value
        let raw = |x: Rational| (x.numer().clone(), x.denom().clone());
        for a in &vals {
            for b in &vals {
                assert_eq!(raw(q_add(a, b)), raw(a + b));
                if !b.is_zero() {
                    let (n, d): (BigInt, BigInt) = (a.numer() * b.denom() * 6, a.denom() * b.numer() * -6);
                    assert_eq!(raw(q_new(n.clone(), d.clone())), raw(Rational::new(n, d)));
                }
                assert_eq!(raw(q_sub(a, b)), raw(a - b));
                assert_eq!(raw(q_mul(a, b)), raw(a * b));
                if !b.is_zero() {
                    assert_eq!(raw(q_div(a, b)), raw(a / b));
                }
            }
        }
    }
}
