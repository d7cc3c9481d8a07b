//! Unsummed terms of the alternative expression for `E` and their value at
//! `u = v = 0`.

use num_traits::{One, Signed, Zero};

use super::efraction::EFraction;
use super::graded::GradedPoly;
use super::rational::Rational;
use super::wpoly::WPoly;
use crate::error::{Error, Result};

/// One summand of `sum_I H(E_I) prod_{i in I} ((z-1)/(z^a_i - 1) - 1)` or a
/// zero-discrepancy correction `kappa (z-1)^2 / ((z^a1 - 1)(z^a2 - 1))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LemmaSummand {
    Stratum { hodge: GradedPoly, discrepancies: Vec<Rational> },
    ZCorrection { kappa: i64, a1: Rational, a2: Rational },
}

impl LemmaSummand {
    pub fn to_efraction(&self) -> Result<EFraction> {
        match self {
            LemmaSummand::Stratum { hodge, discrepancies } => {
                let mut acc = EFraction::from_poly(hodge.clone());
                for a in discrepancies {
                    let f = &EFraction::discrepancy_factor(a)? - &EFraction::one();
                    acc = &acc * &f;
                }
                Ok(acc)
            }
            LemmaSummand::ZCorrection { kappa, a1, a2 } => {
                let z1 = WPoly::z_binomial(&Rational::one());
                let num = GradedPoly::from_z(&(&z1 * &z1) * &WPoly::constant(1, *kappa));
                EFraction::from_poly(num).over_binomial(a1)?.over_binomial(a2)
            }
        }
    }

    /// Limit at `u = v = 0`: each factor tends to `0` for `a > 0` and to `-1`
    /// for `a < 0`; corrections tend to `0`.
    pub fn value_at_zero(&self) -> Result<Rational> {
        match self {
            LemmaSummand::Stratum { hodge, discrepancies } => {
                let mut v = Rational::from_integer(hodge.constant_coefficient());
                for a in discrepancies {
                    if a.is_zero() {
                        return Err(Error::ZeroDiscrepancyFactor);
                    }
                    if a.is_positive() {
                        v = Rational::zero();
                    } else {
                        v = -v;
                    }
                }
                Ok(v)
            }
            LemmaSummand::ZCorrection { .. } => Ok(Rational::zero()),
        }
    }
}

/// Sum of the termwise limits at `u = v = 0`.
pub fn eval_termwise_at_zero(terms: &[LemmaSummand]) -> Result<Rational> {
    terms.iter().map(LemmaSummand::value_at_zero).sum()
}
