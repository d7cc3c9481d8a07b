//! Chains of rational curves: the determinant `D_r`, its identities, and the
//! closed form of a chain's contribution to the stringy invariants.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::germ::{e_function_partial_sum, factor};
use crate::algebra::rational::{common_denominator, q_add, q_mul};
use crate::algebra::{poly_determinant, EFraction, IntMatrix, Rational, WPoly};
use crate::error::{Error, Result};
use crate::graph::ResolutionGraph;

/// Curves `E_1, ..., E_r` of a chain with their `kappa_i = -E_i^2` and
/// discrepancies, and the discrepancies of the boundary curves `E_0` and
/// `E_{r+1}` when present. An absent boundary counts as discrepancy `1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainContext {
    kappas: Vec<i64>,
    discrepancies: Vec<Rational>,
    left: Option<Rational>,
    right: Option<Rational>,
}

impl ChainContext {
    /// Validates `kappa_i a_i = a_{i-1} + a_{i+1}` at every chain vertex.
    pub fn new(
        kappas: Vec<i64>,
        discrepancies: Vec<Rational>,
        left: Option<Rational>,
        right: Option<Rational>,
    ) -> Result<Self> {
        if kappas.is_empty() || kappas.len() != discrepancies.len() {
            return Err(Error::InconsistentChainData(format!(
                "{} self-intersections for {} discrepancies",
                kappas.len(),
                discrepancies.len()
            )));
        }
        let ctx = ChainContext { kappas, discrepancies, left, right };
        for i in 1..=ctx.len() {
            let lhs = q_mul(&Rational::from_integer(BigInt::from(ctx.kappa(i))), &ctx.a(i));
            let rhs = q_add(&ctx.a(i - 1), &ctx.a(i + 1));
            if lhs != rhs {
                return Err(Error::InconsistentChainData(format!(
                    "at E_{i}: kappa a = {lhs} but a_(i-1) + a_(i+1) = {rhs}"
                )));
            }
        }
        Ok(ctx)
    }

    /// The chain of `E_1..E_r` in `g`, with boundaries read from `a`.
    pub fn from_graph(g: &ResolutionGraph, a: &[Rational], chain: &MaximalChain) -> Result<Self> {
        Self::new(
            chain.vertices.iter().map(|&i| g.kappa(i)).collect(),
            chain.vertices.iter().map(|&i| a[i].clone()).collect(),
            chain.left.map(|i| a[i].clone()),
            chain.right.map(|i| a[i].clone()),
        )
    }

    pub fn len(&self) -> usize {
        self.kappas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kappas.is_empty()
    }

    pub fn kappas(&self) -> &[i64] {
        &self.kappas
    }

    pub fn discrepancies(&self) -> &[Rational] {
        &self.discrepancies
    }

    pub fn left(&self) -> Option<&Rational> {
        self.left.as_ref()
    }

    pub fn right(&self) -> Option<&Rational> {
        self.right.as_ref()
    }

    /// `kappa_i` for `1 <= i <= r`.
    pub fn kappa(&self, i: usize) -> i64 {
        self.kappas[i - 1]
    }

    /// `a_i` for `0 <= i <= r + 1`, boundaries defaulting to `1`.
    pub fn a(&self, i: usize) -> Rational {
        let r = self.len();
        match i {
            0 => self.left.clone().unwrap_or_else(Rational::one),
            i if i == r + 1 => self.right.clone().unwrap_or_else(Rational::one),
            i => self.discrepancies[i - 1].clone(),
        }
    }

    /// Common denominator of all `a_i`, boundaries included.
    pub fn scale(&self) -> u64 {
        let all: Vec<Rational> = (0..=self.len() + 1).map(|i| self.a(i)).collect();
        common_denominator(&all)
    }

    /// `E_1..E_k` with `E_{k+1}` as right boundary.
    pub fn truncated(&self, k: usize) -> ChainContext {
        assert!(k >= 1 && k <= self.len());
        ChainContext {
            kappas: self.kappas[..k].to_vec(),
            discrepancies: self.discrepancies[..k].to_vec(),
            left: self.left.clone(),
            right: Some(self.a(k + 1)),
        }
    }

    /// The chain read from `E_r` to `E_1`.
    pub fn reversed(&self) -> ChainContext {
        ChainContext {
            kappas: self.kappas.iter().rev().copied().collect(),
            discrepancies: self.discrepancies.iter().rev().cloned().collect(),
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    fn z(&self, t: u64, exp: &Rational) -> WPoly {
        WPoly::z_term(t, exp, 1).expect("exponent on the chain scale")
    }

    /// `K_i = sum_{j < kappa_i} z^(j a_i)`.
    fn k_poly(&self, t: u64, i: usize) -> WPoly {
        WPoly::geometric(t, &self.a(i), self.kappa(i)).expect("exponent on the chain scale")
    }
}

/// The `r x r` matrix whose determinant is `D_r`, entry by entry (1-based):
/// `d_ii = K_i`; for odd `i`, `d_{i,i-1} = -z^(a_{i+1})`,
/// `d_{i,i+1} = -z^(a_{i+2})`, `d_{i,i+2} = z^(a_{i+1}) - 1`; for even `i`,
/// `d_{i,i-2} = z^(a_{i-1}) - 1`, `d_{i,i-1} = -z^(a_{i-2})`,
/// `d_{i,i+1} = -z^(a_{i-1})`.
pub fn chain_dr_matrix(ctx: &ChainContext) -> Vec<Vec<WPoly>> {
    let r = ctx.len();
    let t = ctx.scale();
    let mut m = vec![vec![WPoly::zero(t); r]; r];
    let one = WPoly::one(t);
    let mut put = |i: usize, j: usize, v: WPoly| {
        if j >= 1 && j <= r {
            m[i - 1][j - 1] = v;
        }
    };
    for i in 1..=r {
        put(i, i, ctx.k_poly(t, i));
        if i % 2 == 1 {
            put(i, i.wrapping_sub(1), -ctx.z(t, &ctx.a(i + 1)));
            if i + 2 <= r + 1 {
                put(i, i + 1, -ctx.z(t, &ctx.a(i + 2)));
            }
            put(i, i + 2, &ctx.z(t, &ctx.a(i + 1)) - &one);
        } else {
            put(i, i - 2, &ctx.z(t, &ctx.a(i - 1)) - &one);
            put(i, i - 1, -ctx.z(t, &ctx.a(i - 2)));
            put(i, i + 1, -ctx.z(t, &ctx.a(i - 1)));
        }
    }
    m
}

/// `D_r`, the determinant of [`chain_dr_matrix`].
pub fn chain_dr(ctx: &ChainContext) -> Result<WPoly> {
    poly_determinant(&chain_dr_matrix(ctx))
}

/// Contribution of the strata meeting the chain: `D_r` times
/// `(z - 1)/(z^(a_0) - 1)` and `(z - 1)/(z^(a_{r+1}) - 1)` for the boundary
/// curves that are present, in reduced form.
pub fn chain_contribution(ctx: &ChainContext) -> Result<EFraction> {
    if ctx.left.as_ref().is_some_and(Zero::is_zero) || ctx.right.as_ref().is_some_and(Zero::is_zero) {
        return Err(Error::ZeroBoundaryDiscrepancy);
    }
    let mut c = EFraction::from_z(chain_dr(ctx)?);
    for b in [&ctx.left, &ctx.right].into_iter().flatten() {
        c = &c * &factor(b)?;
    }
    Ok(c.reduce())
}

/// Absolute determinant of the chain's intersection matrix.
pub fn chain_intersection_determinant(kappas: &[i64]) -> BigInt {
    let r = kappas.len();
    let mut m = IntMatrix::zeros(r);
    for (i, &k) in kappas.iter().enumerate() {
        m.set(i, i, BigInt::from(-k));
        if i + 1 < r {
            m.set(i, i + 1, BigInt::one());
            m.set(i + 1, i, BigInt::one());
        }
    }
    m.determinant().abs()
}

/// Contribution of the chain to `e`: `d_r / (a_0 a_{r+1})`, with `d_r` the
/// absolute determinant of the intersection matrix of `E_1..E_r`.
pub fn euler_chain_contribution(ctx: &ChainContext) -> Result<Rational> {
    let (a0, ar) = (ctx.a(0), ctx.a(ctx.len() + 1));
    if a0.is_zero() || ar.is_zero() {
        return Err(Error::ZeroBoundaryDiscrepancy);
    }
    Ok(Rational::from_integer(chain_intersection_determinant(&ctx.kappas)) / (a0 * ar))
}

/// A maximal path `E_1..E_r` of rational curves, each meeting the rest of
/// the divisor transversally in at most two points, with the curves met at
/// either end outside the path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalChain {
    pub vertices: Vec<usize>,
    pub left: Option<usize>,
    pub right: Option<usize>,
}

impl MaximalChain {
    pub fn ids(&self, g: &ResolutionGraph) -> Vec<String> {
        self.vertices.iter().map(|&i| g.id(i).to_string()).collect()
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &i in &self.vertices {
            m[i] = true;
        }
        m
    }
}

/// All maximal chains of `g`. Closed cycles of such curves are not chains
/// and are skipped.
pub fn find_maximal_chains(g: &ResolutionGraph) -> Vec<MaximalChain> {
    let n = g.len();
    let inner: Vec<bool> = (0..n)
        .map(|i| {
            g.vertex(i).genus == 0 && g.neighbors(i).len() <= 2 && g.neighbors(i).iter().all(|&(_, m)| m == 1)
        })
        .collect();
    let mut chains = Vec::new();
    for comp in g.components(&inner) {
        let inside = |j: usize| comp.contains(&j);
        let Some(&start) = comp
            .iter()
            .find(|&&i| g.neighbors(i).iter().filter(|&&(j, _)| inside(j)).count() <= 1)
        else {
            continue;
        };
        let mut path = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&(next, _)) = g.neighbors(cur).iter().find(|&&(j, _)| inside(j) && j != prev) {
            prev = cur;
            cur = next;
            path.push(cur);
        }
        let outside = |v: usize| -> Vec<usize> {
            g.neighbors(v).iter().map(|&(j, _)| j).filter(|&j| !inside(j)).collect()
        };
        let (left, right) = if path.len() == 1 {
            let o = outside(start);
            (o.first().copied(), o.get(1).copied())
        } else {
            (outside(path[0]).first().copied(), outside(cur).first().copied())
        };
        chains.push(MaximalChain { vertices: path, left, right });
    }
    chains
}

/// Direct sum of the strata meeting the chain's curves.
pub fn chain_direct_sum(g: &ResolutionGraph, a: &[Rational], chain: &MaximalChain) -> Result<EFraction> {
    e_function_partial_sum(g, a, &chain.mask(g.len()))
}

/// `D_1, ..., D_r` of a chain together with the identities they satisfy.
#[derive(Clone, Debug, Serialize)]
pub struct ChainIdentityReport {
    pub r: usize,
    /// `D_k` for `k = 1..r`, as strings.
    pub minors: Vec<String>,
    /// `D_k(1)` and the absolute determinant of `E_1..E_k`.
    pub values_at_one: Vec<(String, String)>,
    pub deletion_checked: usize,
    pub recurrence_checked: usize,
    pub a_claim_checked: usize,
}

/// Checks, for every `k`:
/// - deleting the last row and column of the matrix of `E_1..E_k` gives
///   the matrix whose determinant is `D_{k-1}`;
/// - `D_k = (sum_{j=0}^{kappa_k-2} z^(j a_k)) D_{k-1}
///   + z^((kappa_k - 1) a_k - a_{k-1}) (D_{k-1} - D_{k-2})` with `D_0 = 1`;
/// - `D_k = (sum_{j=0}^{kappa_k-2} z^(j a_k)) D_{k-1} + z^((kappa_k-1) a_k) A_{k-1}`
///   where `A_1 = sum_{j=0}^{kappa_1-2} z^(j a_1)` and
///   `A_k = (sum_{j=0}^{kappa_k-3} z^(j a_k)) D_{k-1} + z^((kappa_k-2) a_k) A_{k-1}`;
/// - `D_k(1)` is the absolute determinant of the intersection matrix.
pub fn check_chain_identities(ctx: &ChainContext) -> Result<ChainIdentityReport> {
    let r = ctx.len();
    let t = ctx.scale();
    let full = chain_dr_matrix(ctx);
    let mut d: Vec<WPoly> = vec![WPoly::one(t)];
    let mut deletion_checked = 0;
    for k in 1..=r {
        let lead: Vec<Vec<WPoly>> = full[..k].iter().map(|row| row[..k].to_vec()).collect();
        let dk = poly_determinant(&lead)?;
        if k < r {
            let own = chain_dr(&ctx.truncated(k))?;
            if own != dk {
                return Err(Error::AssertionFailure(format!(
                    "deleting rows {}..{r} gives {dk}, but D_{k} of E_1..E_{k} is {own}",
                    k + 1
                )));
            }
            deletion_checked += 1;
        }
        d.push(dk);
    }
    let geo = |i: usize, count: i64| WPoly::geometric(t, &ctx.a(i), count).expect("chain scale");
    let zp = |e: &Rational| WPoly::z_term(t, e, 1).expect("chain scale");
    let kr = |i: usize| Rational::from_integer(BigInt::from(ctx.kappa(i)));

    let mut recurrence_checked = 0;
    for k in 2..=r {
        let e = (kr(k) - Rational::one()) * ctx.a(k) - ctx.a(k - 1);
        let rhs = &(&geo(k, ctx.kappa(k) - 1) * &d[k - 1]) + &(&zp(&e) * &(&d[k - 1] - &d[k - 2]));
        if rhs != d[k] {
            return Err(Error::AssertionFailure(format!("three-term recurrence fails at k = {k}: D_{k} = {} but the recurrence gives {rhs}", d[k])));
        }
        recurrence_checked += 1;
    }

    let mut a_claim_checked = 0;
    let mut a_prev = geo(1, ctx.kappa(1) - 1);
    for k in 2..=r {
        let e = (kr(k) - Rational::one()) * ctx.a(k);
        let rhs = &(&geo(k, ctx.kappa(k) - 1) * &d[k - 1]) + &(&zp(&e) * &a_prev);
        if rhs != d[k] {
            return Err(Error::AssertionFailure(format!("A-recursion fails at k = {k}: D_{k} = {} but it gives {rhs}", d[k])));
        }
        a_claim_checked += 1;
        let e2 = (kr(k) - Rational::from_integer(BigInt::from(2))) * ctx.a(k);
        a_prev = &(&geo(k, ctx.kappa(k) - 2) * &d[k - 1]) + &(&zp(&e2) * &a_prev);
    }

    let mut values_at_one = Vec::with_capacity(r);
    for k in 1..=r {
        let v = d[k].eval_at_one();
        let det = chain_intersection_determinant(&ctx.kappas[..k]);
        if v != det {
            return Err(Error::AssertionFailure(format!("D_{k}(1) = {v} but the intersection determinant is {det}")));
        }
        values_at_one.push((v.to_string(), det.to_string()));
    }

    Ok(ChainIdentityReport {
        r,
        minors: d[1..].iter().map(ToString::to_string).collect(),
        values_at_one,
        deletion_checked,
        recurrence_checked,
        a_claim_checked,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NonnegativityReport {
    pub terms: usize,
    pub constant_term: String,
    /// Whether all chain discrepancies are positive, which forces the
    /// constant term to be `1`.
    pub all_positive: bool,
}

/// Asserts that every coefficient of `D_r` is nonnegative and that the
/// constant term is positive, and equal to `1` when all `a_i > 0`.
pub fn check_nonnegativity(ctx: &ChainContext) -> Result<NonnegativityReport> {
    let d = chain_dr(ctx)?;
    if !d.all_coefficients_nonnegative() {
        return Err(Error::AssertionFailure(format!("D_r has a negative coefficient: {d}")));
    }
    let c = d.constant_term();
    if !c.is_positive() {
        return Err(Error::AssertionFailure(format!("constant term of D_r is {c}")));
    }
    let all_positive = ctx.discrepancies.iter().all(Signed::is_positive);
    if all_positive && !c.is_one() {
        return Err(Error::AssertionFailure(format!("all a_i > 0 but the constant term of D_r is {c}")));
    }
    Ok(NonnegativityReport { terms: d.len(), constant_term: c.to_string(), all_positive })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};
    use crate::discrepancy::log_discrepancies;

    fn a53() -> ChainContext {
        ChainContext::new(vec![2, 3], vec![rat(4, 5), rat(3, 5)], None, None).unwrap()
    }

    fn zt(t: u64, p: i64, q: i64) -> WPoly {
        WPoly::z_term(t, &rat(p, q), 1).unwrap()
    }

    #[test]
    fn d2_of_a53() {
        let d = chain_dr(&a53()).unwrap();
        let k1 = &zt(5, 0, 1) + &zt(5, 4, 5);
        let k2 = &(&zt(5, 0, 1) + &zt(5, 3, 5)) + &zt(5, 6, 5);
        assert_eq!(d, &(&k1 * &k2) - &zt(5, 2, 1));
        assert_eq!(d.to_string(), "1 + z^(3/5) + z^(4/5) + z^(6/5) + z^(7/5)");
        assert_eq!(chain_contribution(&a53()).unwrap(), EFraction::from_z(d));
        assert_eq!(euler_chain_contribution(&a53()).unwrap(), int(5));
    }

    #[test]
    fn d1_is_k1() {
        let ctx = ChainContext::new(vec![3], vec![rat(2, 3)], None, None).unwrap();
        assert_eq!(chain_dr(&ctx).unwrap(), WPoly::geometric(3, &rat(2, 3), 3).unwrap());
        let zero = ChainContext::new(vec![2], vec![int(0)], Some(int(-1)), None).unwrap();
        assert_eq!(chain_dr(&zero).unwrap(), WPoly::constant(1, 2));
        assert_eq!(euler_chain_contribution(&zero).unwrap(), int(-2));
        assert_eq!(check_nonnegativity(&zero).unwrap().constant_term, "2");
    }

    #[test]
    fn inconsistent_data_rejected() {
        assert!(matches!(
            ChainContext::new(vec![2, 3], vec![rat(1, 2), rat(3, 5)], None, None),
            Err(Error::InconsistentChainData(_))
        ));
    }

    #[test]
    fn zero_boundary_rejected() {
        let ctx = ChainContext::new(vec![2], vec![int(1)], Some(int(0)), Some(int(2))).unwrap();
        assert_eq!(chain_contribution(&ctx), Err(Error::ZeroBoundaryDiscrepancy));
    }

    #[test]
    fn identities_on_a_long_chain() {
        let g = ResolutionGraph::chain(&[2, 5, 2, 3, 2, 4]).unwrap();
        let a = log_discrepancies(&g).unwrap();
        let chains = find_maximal_chains(&g);
        assert_eq!(chains.len(), 1);
        let ctx = ChainContext::from_graph(&g, a.values(), &chains[0]).unwrap();
        let rep = check_chain_identities(&ctx).unwrap();
        assert_eq!((rep.deletion_checked, rep.recurrence_checked, rep.a_claim_checked), (5, 5, 5));
        check_nonnegativity(&ctx).unwrap();
        check_chain_identities(&ctx.reversed()).unwrap();
    }

    #[test]
    fn triangle_legs_are_chains() {
        let tri = super::super::germ::tests::triangle();
        let a = log_discrepancies(&tri).unwrap();
        let chains = find_maximal_chains(&tri);
        assert_eq!(chains.len(), 3);
        for c in &chains {
            assert_eq!(c.vertices.len(), 1);
            assert_eq!(c.left, Some(0));
            assert_eq!(c.right, None);
            let ctx = ChainContext::from_graph(&tri, a.values(), c).unwrap();
            assert_eq!(chain_contribution(&ctx).unwrap(), chain_direct_sum(&tri, a.values(), c).unwrap());
        }
    }
}
