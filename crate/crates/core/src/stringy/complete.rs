//! Complete surfaces: the E-function from the Hodge polynomial of the
//! resolved surface and the dual graphs of the singular points.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::germ::{admissible_discrepancies, e_function_partial_sum, zero_curve_neighbors, HodgeCurveData};
use crate::algebra::{eval_termwise_at_zero, EFraction, GradedPoly, LemmaSummand, Rational};
use crate::classify::SingularityClass;
use crate::error::{Error, Result};
use crate::graph::{GraphDocument, ResolutionGraph};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct HodgeTerm {
    pub p: i64,
    pub q: i64,
    pub coef: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompleteSurfaceDocument {
    #[serde(rename = "hodge_X")]
    pub hodge_x: Vec<HodgeTerm>,
    #[serde(default)]
    pub germs: Vec<GraphDocument>,
}

/// A resolved surface `X` given by its Hodge polynomial, with the dual graphs
/// of the points of `S` it resolves.
#[derive(Clone, Debug)]
pub struct CompleteSurface {
    pub hodge_x: GradedPoly,
    pub germs: Vec<ResolutionGraph>,
}

impl CompleteSurface {
    pub fn new(hodge_x: GradedPoly, germs: Vec<ResolutionGraph>) -> Self {
        CompleteSurface { hodge_x, germs }
    }

    pub fn from_document(doc: CompleteSurfaceDocument) -> Result<Self> {
        let hodge_x =
            GradedPoly::from_uv_terms(doc.hodge_x.iter().map(|t| (t.p, t.q, BigInt::from(t.coef))));
        let germs = doc.germs.into_iter().map(ResolutionGraph::from_document).collect::<Result<_>>()?;
        Ok(CompleteSurface { hodge_x, germs })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: CompleteSurfaceDocument = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        Self::from_document(doc)
    }

    pub fn e_function(&self) -> Result<EFraction> {
        stringy_complete_surface(&self.hodge_x, &self.germs)
    }
}

fn validate_hodge(h_x: &GradedPoly) -> Result<()> {
    let h = EFraction::from_poly(h_x.clone());
    if !h_x.constant_coefficient().is_one() || h.dualize() != h {
        return Err(Error::NonSelfDualHX);
    }
    Ok(())
}

/// The summands `H(E_I) prod_{i in I} ((z-1)/(z^a_i - 1) - 1)` over strata
/// avoiding zero-discrepancy curves, the empty stratum giving `H_X`, and
/// the zero-discrepancy corrections.
pub fn lemma_summands(h_x: &GradedPoly, germs: &[ResolutionGraph]) -> Result<Vec<LemmaSummand>> {
    let mut out = vec![LemmaSummand::Stratum { hodge: h_x.clone(), discrepancies: Vec::new() }];
    for g in germs {
        let a = admissible_discrepancies(g)?;
        let a = a.values();
        let hodge = HodgeCurveData::of(g);
        for i in 0..g.len() {
            if a[i].is_zero() {
                let (a1, a2) = zero_curve_neighbors(g, a, i);
                out.push(LemmaSummand::ZCorrection { kappa: g.kappa(i), a1, a2 });
            } else {
                out.push(LemmaSummand::Stratum { hodge: hodge.closed[i].clone(), discrepancies: vec![a[i].clone()] });
            }
        }
        for &(i, j, m) in &hodge.points {
            if !a[i].is_zero() && !a[j].is_zero() {
                out.push(LemmaSummand::Stratum {
                    hodge: GradedPoly::constant(m),
                    discrepancies: vec![a[i].clone(), a[j].clone()],
                });
            }
        }
    }
    Ok(out)
}

/// `E(S)` assembled from [`lemma_summands`], checked against the direct sum
/// `H(X - E) + sum_P E_P` where `H(X - E) = H_X - sum H(E_i) + #points`.
pub fn stringy_complete_surface(h_x: &GradedPoly, germs: &[ResolutionGraph]) -> Result<EFraction> {
    validate_hodge(h_x)?;
    let mut lemma = EFraction::zero();
    for s in lemma_summands(h_x, germs)? {
        lemma = (&lemma + &s.to_efraction()?).reduce();
    }
    let mut open = h_x.clone();
    let mut direct = EFraction::zero();
    for g in germs {
        let a = admissible_discrepancies(g)?;
        let hodge = HodgeCurveData::of(g);
        for c in &hodge.closed {
            open = &open - c;
        }
        for &(_, _, m) in &hodge.points {
            open = &open + &GradedPoly::constant(m);
        }
        direct = (&direct + &e_function_partial_sum(g, a.values(), &vec![true; g.len()])?).reduce();
    }
    direct = (&direct + &EFraction::from_poly(open)).reduce();
    if direct != lemma {
        return Err(Error::AssertionFailure(format!(
            "alternative expression {lemma} differs from the direct sum {direct}"
        )));
    }
    Ok(lemma)
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    pub e_function: String,
    pub dual: String,
}

/// Asserts `(uv)^2 E(1/u, 1/v) = E`.
pub fn check_duality(e: &EFraction) -> Result<DualityReport> {
    let d = e.dualize();
    if d != *e {
        return Err(Error::AssertionFailure(format!("dual {d} differs from {e}")));
    }
    Ok(DualityReport { e_function: e.to_string(), dual: d.to_string() })
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroValueReport {
    #[serde(with = "crate::algebra::rational::serde_str")]
    pub value: Rational,
    #[serde(with = "crate::algebra::rational::serde_str")]
    pub expected: Rational,
    /// Euler characteristic of the dual graph of each non log terminal germ.
    pub euler_characteristics: Vec<i64>,
    /// First Betti numbers `1 - chi` of those graphs.
    pub circles: Vec<i64>,
}

/// `E(0, 0)` by termwise limits, checked against
/// `1 - sum chi(Gamma_P)` over the non log terminal germs.
pub fn e_at_zero(h_x: &GradedPoly, germs: &[ResolutionGraph]) -> Result<ZeroValueReport> {
    validate_hodge(h_x)?;
    let value = eval_termwise_at_zero(&lemma_summands(h_x, germs)?)?;
    let mut chis = Vec::new();
    for g in germs {
        let a = admissible_discrepancies(g)?;
        if !SingularityClass::from_discrepancies(a.values()).is_log_terminal() {
            chis.push(g.euler_characteristic());
        }
    }
    let expected = Rational::one() - Rational::from_integer(BigInt::from(chis.iter().sum::<i64>()));
    if value != expected {
        return Err(Error::AssertionFailure(format!("E(0,0) = {value} but 1 - sum chi = {expected}")));
    }
    Ok(ZeroValueReport {
        value,
        expected,
        circles: chis.iter().map(|c| 1 - c).collect(),
        euler_characteristics: chis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    fn p2() -> GradedPoly {
        GradedPoly::from_uv_terms([(0, 0, BigInt::one()), (1, 1, BigInt::one()), (2, 2, BigInt::one())])
    }

    #[test]
    fn smooth_surface() {
        let e = stringy_complete_surface(&p2(), &[]).unwrap();
        assert_eq!(e, EFraction::from_poly(p2()));
        check_duality(&e).unwrap();
        assert_eq!(e_at_zero(&p2(), &[]).unwrap().value, int(1));
    }

    #[test]
    fn one_germ_each() {
        let a53 = ResolutionGraph::chain(&[2, 3]).unwrap();
        let e = stringy_complete_surface(&p2(), std::slice::from_ref(&a53)).unwrap();
        check_duality(&e).unwrap();
        let (du, dv) = e.uv_degrees().unwrap();
        assert!(du <= int(2) && dv <= int(2));
        assert_eq!(e_at_zero(&p2(), &[a53]).unwrap().value, int(1));

        let tri = super::super::germ::tests::triangle();
        let e = stringy_complete_surface(&p2(), std::slice::from_ref(&tri)).unwrap();
        check_duality(&e).unwrap();
        assert_eq!(e_at_zero(&p2(), &[tri]).unwrap().value, int(0));
    }

    #[test]
    fn rejects_non_self_dual() {
        let h = GradedPoly::from_uv_terms([(0, 0, BigInt::one()), (1, 1, BigInt::one())]);
        assert!(matches!(stringy_complete_surface(&h, &[]), Err(Error::NonSelfDualHX)));
    }
}
