//! JSON forms of polynomials and rational functions.
//!
//! A [`WPoly`] is an array of `{"exp": "p/q", "coef": "n"}` sorted by
//! exponent; an [`EFraction`] is `{"num": [{"grade": d, "poly": [...]}],
//! "den": ["b", ...]}`.

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::efraction::EFraction;
use super::graded::GradedPoly;
use super::rational::{common_denominator, parse_rational, scaled_exponent, Rational};
use super::wpoly::WPoly;

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: String,
    coef: String,
}

#[derive(Serialize, Deserialize)]
struct GradeJson {
    grade: i64,
    poly: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct FractionJson {
    num: Vec<GradeJson>,
    den: Vec<String>,
}

fn poly_to_json(p: &WPoly) -> Vec<TermJson> {
    p.z_terms()
        .map(|(e, c)| TermJson { exp: e.to_string(), coef: c.to_string() })
        .collect()
}

fn poly_from_json(terms: &[TermJson]) -> Result<WPoly, String> {
    let mut parsed = Vec::with_capacity(terms.len());
    for t in terms {
        let e = parse_rational(&t.exp).map_err(|e| e.to_string())?;
        let c: BigInt = t.coef.trim().parse().map_err(|_| format!("bad coefficient {:?}", t.coef))?;
        parsed.push((e, c));
    }
    let scale = common_denominator(parsed.iter().map(|(e, _)| e));
    Ok(WPoly::from_terms(
        scale,
        parsed.into_iter().map(|(e, c)| (scaled_exponent(&e, scale).expect("common scale"), c)),
    ))
}

impl Serialize for WPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        poly_to_json(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for WPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms = Vec::<TermJson>::deserialize(d)?;
        poly_from_json(&terms).map_err(D::Error::custom)
    }
}

fn graded_to_json(g: &GradedPoly) -> Vec<GradeJson> {
    g.parts().map(|(d, p)| GradeJson { grade: d, poly: poly_to_json(p) }).collect()
}

fn graded_from_json(parts: &[GradeJson]) -> Result<GradedPoly, String> {
    let mut g = GradedPoly::zero();
    for part in parts {
        g = &g + &GradedPoly::from_wpoly(part.grade, poly_from_json(&part.poly)?);
    }
    Ok(g)
}

impl Serialize for EFraction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FractionJson {
            num: graded_to_json(self.numerator()),
            den: self.denominator().iter().map(Rational::to_string).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EFraction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = FractionJson::deserialize(d)?;
        let num = graded_from_json(&raw.num).map_err(D::Error::custom)?;
        let den = raw
            .den
            .iter()
            .map(|b| parse_rational(b))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        EFraction::new(num, den).map_err(D::Error::custom)
    }
}
