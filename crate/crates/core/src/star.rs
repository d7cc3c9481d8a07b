//! Star-shaped graphs from Seifert data `{g; kappa; (n_1, q_1), ..., (n_k, q_k)}`:
//! a central curve of genus `g` and self-intersection `-kappa` with `k`
//! chains of rational curves attached.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::rational::{q_div, q_mul, q_new, to_i64};
use crate::algebra::{EFraction, GradedPoly, Rational, WPoly};
use crate::classify::SingularityClass;
use crate::discrepancy::{log_discrepancies, DiscrepancyVector};
use crate::error::{Error, Result};
use crate::graph::{hj_chain, CurveVertex, Edge, GraphKind, ResolutionGraph};
use crate::stringy::chain::{chain_dr, ChainContext};
use crate::stringy::germ::{e_function_partial_sum, euler_partial_sum};

/// Id of the central curve.
pub const CENTER: &str = "E";

/// Id of the `j`-th curve of leg `i` (both 1-based), counted from the
/// center outward.
pub fn leg_vertex_id(i: usize, j: usize) -> String {
    format!("L{i}_{j}")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeifertData {
    pub genus: u32,
    pub kappa: i64,
    /// `(n_i, q_i)` with `0 < q_i < n_i` coprime.
    pub legs: Vec<(i64, i64)>,
}

impl SeifertData {
    pub fn new(genus: u32, kappa: i64, legs: Vec<(i64, i64)>) -> Result<Self> {
        if kappa < 1 {
            return Err(Error::BadSeifertData(format!("kappa = {kappa} must be positive")));
        }
        for &(n, q) in &legs {
            if !(0 < q && q < n) || n.gcd(&q) != 1 {
                return Err(Error::BadSeifertData(format!("leg {n}/{q}: need 0 < q < n coprime")));
            }
        }
        Ok(SeifertData { genus, kappa, legs })
    }

    /// Parses legs written `n1/q1,n2/q2,...`.
    pub fn parse_legs(text: &str) -> Result<Vec<(i64, i64)>> {
        text.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                let (n, q) = s.split_once('/').ok_or_else(|| Error::BadSeifertData(format!("leg {s:?} is not n/q")))?;
                let n = n.trim().parse::<i64>().map_err(|_| Error::BadSeifertData(format!("leg {s:?}")))?;
                let q = q.trim().parse::<i64>().map_err(|_| Error::BadSeifertData(format!("leg {s:?}")))?;
                Ok((n, q))
            })
            .collect()
    }

    pub fn k(&self) -> usize {
        self.legs.len()
    }

    /// `kappa - sum q_i/n_i`; positive exactly when the star is negative
    /// definite.
    pub fn excess(&self) -> Rational {
        let big_n = self.product_n();
        let mut num = BigInt::from(self.kappa) * &big_n;
        for &(n, q) in &self.legs {
            num -= q * (&big_n / n);
        }
        q_new(num, big_n)
    }

    /// `2 - 2g - k + sum 1/n_i`.
    fn numerator(&self) -> Rational {
        let big_n = self.product_n();
        let mut num = BigInt::from(2 - 2 * i64::from(self.genus) - self.k() as i64) * &big_n;
        for &(n, _) in &self.legs {
            num += &big_n / n;
        }
        q_new(num, big_n)
    }

    fn product_n(&self) -> BigInt {
        self.legs.iter().map(|&(n, _)| BigInt::from(n)).product()
    }
}

impl fmt::Display for SeifertData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}; {}", self.genus, self.kappa)?;
        for (n, q) in &self.legs {
            write!(f, "; ({n},{q})")?;
        }
        write!(f, "}}")
    }
}

/// The star graph: `E` plus, for each leg, the chain `hj_chain(n_i, q_i)`
/// whose first curve meets `E`. Deleting that first curve leaves a chain of
/// determinant `q_i`.
pub fn build_star(s: &SeifertData) -> Result<ResolutionGraph> {
    let mut vertices = vec![CurveVertex::new(CENTER, s.genus, -s.kappa)];
    let mut edges = Vec::new();
    for (i, &(n, q)) in s.legs.iter().enumerate() {
        let kappas = hj_chain(n, q).map_err(|e| Error::BadSeifertData(e.to_string()))?;
        let mut prev = CENTER.to_string();
        for (j, k) in kappas.iter().enumerate() {
            let id = leg_vertex_id(i + 1, j + 1);
            vertices.push(CurveVertex::rational(id.clone(), -k));
            edges.push(Edge::new(prev, id.clone(), 1));
            prev = id;
        }
    }
    let g = ResolutionGraph::new(vertices, edges, GraphKind::Germ, true);
    let definite = s.excess().is_positive();
    match &g {
        Ok(_) if !definite => Err(Error::AssertionFailure(format!("{s}: kappa - sum q/n <= 0 but the star is negative definite"))),
        Err(Error::NotNegativeDefinite) if definite => Err(Error::AssertionFailure(format!("{s}: kappa - sum q/n > 0 but the star is not negative definite"))),
        _ => g,
    }
}

/// Leg `i` (0-based) as a chain read from its far end to the curve meeting
/// `E`, with `E` as right boundary.
pub fn leg_context(s: &SeifertData, a: &DiscrepancyVector, i: usize) -> Result<ChainContext> {
    let (n, q) = s.legs[i];
    let mut kappas = hj_chain(n, q)?;
    let mut values: Vec<Rational> =
        (1..=kappas.len()).map(|j| a.get(&leg_vertex_id(i + 1, j)).expect("leg vertex").clone()).collect();
    kappas.reverse();
    values.reverse();
    ChainContext::new(kappas, values, None, Some(a.get(CENTER).expect("center").clone()))
}

#[derive(Clone, Debug, Serialize)]
pub struct CentralDiscrepancy {
    /// `(2 - 2g - k + sum 1/n_i) / (kappa - sum q_i/n_i)`.
    #[serde(with = "crate::algebra::rational::serde_str")]
    pub quotient_form: Rational,
    /// `(prod n_i / d)(2 - 2g - k + sum 1/n_i)`.
    #[serde(with = "crate::algebra::rational::serde_str")]
    pub determinant_form: Rational,
    #[serde(with = "crate::algebra::rational::serde_str")]
    pub solved: Rational,
    /// Absolute determinant of the intersection matrix.
    pub d: String,
    /// Discrepancies of the curves meeting `E`, equal to `(q_i a + 1)/n_i`.
    #[serde(with = "crate::algebra::rational::serde_str::vec")]
    pub leg_inner: Vec<Rational>,
}

fn central_checked(s: &SeifertData, g: &ResolutionGraph, a: &DiscrepancyVector) -> Result<CentralDiscrepancy> {
    let d = g.determinant().abs();
    let (numerator, excess) = (s.numerator(), s.excess());
    let quotient_form = q_div(&numerator, &excess);
    let determinant_form = q_mul(&q_new(s.product_n(), d.clone()), &numerator);
    let solved = a.get(CENTER).expect("center").clone();
    if quotient_form != solved || determinant_form != solved {
        return Err(Error::AssertionFailure(format!(
            "{s}: central discrepancy {quotient_form} / {determinant_form} by the closed forms, {solved} by the linear system"
        )));
    }
    if q_mul(&excess, &Rational::from_integer(s.product_n())) != Rational::from_integer(d.clone()) {
        return Err(Error::AssertionFailure(format!("{s}: (kappa - sum q/n) prod n differs from d = {d}")));
    }
    let mut leg_inner = Vec::with_capacity(s.k());
    for (i, &(n, q)) in s.legs.iter().enumerate() {
        let ai = a.get(&leg_vertex_id(i + 1, 1)).expect("leg vertex").clone();
        let expected = q_new(q * solved.numer() + solved.denom(), n * solved.denom());
        if ai != expected {
            return Err(Error::AssertionFailure(format!("{s}: leg {} meets E with a = {ai}, not {expected}", i + 1)));
        }
        leg_inner.push(ai);
    }
    Ok(CentralDiscrepancy { quotient_form, determinant_form, solved, d: d.to_string(), leg_inner })
}

/// Both closed forms of the central discrepancy, checked against the
/// linear system and the leg relation `a_i = (q_i a + 1)/n_i`.
pub fn star_central_discrepancy(s: &SeifertData) -> Result<CentralDiscrepancy> {
    let g = build_star(s)?;
    let a = log_discrepancies(&g)?;
    let c = central_checked(s, &g, &a)?;
    if c.solved.is_zero() {
        return Err(Error::StrictlyLogCanonical);
    }
    Ok(c)
}

#[derive(Clone, Debug, Serialize)]
pub struct StarInvariants {
    pub seifert: SeifertData,
    #[serde(with = "crate::algebra::rational::serde_str")]
    pub a_central: Rational,
    pub d: String,
    #[serde(with = "crate::algebra::rational::serde_str")]
    pub e_p: Rational,
    #[serde(rename = "E_P")]
    pub e_function: EFraction,
    /// `D^(i)` of every leg, with `E` as boundary.
    pub leg_determinants: Vec<WPoly>,
    #[serde(skip)]
    pub class: Option<SingularityClass>,
    #[serde(skip)]
    pub central: Option<CentralDiscrepancy>,
}

/// `e_P = (1/a)(2 - 2g - k + sum n_i)` and
/// `E_P = (z-1)/(z^a - 1) (H(E°) + sum_i D^(i))` with
/// `H(E°) = uv - g(u+v) + 1 - k`, both checked against the direct sums
/// over the strata of the star.
pub fn star_invariants(s: &SeifertData) -> Result<StarInvariants> {
    let g = build_star(s)?;
    let a = log_discrepancies(&g)?;
    invariants_on(s, &g, &a)
}

fn invariants_on(s: &SeifertData, g: &ResolutionGraph, a: &DiscrepancyVector) -> Result<StarInvariants> {
    let central = central_checked(s, g, a)?;
    let ac = central.solved.clone();
    if ac.is_zero() {
        return Err(Error::StrictlyLogCanonical);
    }
    let sum_n: i64 = s.legs.iter().map(|&(n, _)| n).sum();
    let e_p = Rational::from_integer(BigInt::from(2 - 2 * i64::from(s.genus) - s.k() as i64 + sum_n)) / &ac;

    let mut inner = GradedPoly::curve(s.genus, s.k() as i64);
    let mut leg_determinants = Vec::with_capacity(s.k());
    for i in 0..s.k() {
        let d = chain_dr(&leg_context(s, a, i)?)?;
        inner = &inner + &GradedPoly::from_z(d.clone());
        leg_determinants.push(d);
    }
    let closed = (&EFraction::from_poly(inner) * &EFraction::discrepancy_factor(&ac)?).reduce();

    let all = vec![true; g.len()];
    let direct_e = euler_partial_sum(g, a.values(), &all);
    if direct_e != e_p {
        return Err(Error::AssertionFailure(format!("{s}: e_P = {e_p} by the closed form, {direct_e} directly")));
    }
    let direct = e_function_partial_sum(g, a.values(), &all)?;
    if direct != closed {
        return Err(Error::AssertionFailure(format!("{s}: E_P = {closed} by the closed form, {direct} directly")));
    }
    let limit = closed.limit_at_one()?;
    if limit != e_p {
        return Err(Error::AssertionFailure(format!("{s}: E_P tends to {limit} at 1, but e_P = {e_p}")));
    }
    Ok(StarInvariants {
        seifert: s.clone(),
        a_central: ac,
        d: central.d.clone(),
        e_p,
        e_function: closed,
        leg_determinants,
        class: Some(SingularityClass::from_discrepancies(a.values())),
        central: Some(central),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseTableReport {
    /// Sorted `(n_1, n_2, n_3)`.
    pub case: (i64, i64, i64),
    /// The denominator expression `1/a`.
    pub denominator: i64,
    /// `c` in `a = c/d`.
    pub c: i64,
    pub d: i64,
    #[serde(with = "crate::algebra::rational::serde_str")]
    pub a: Rational,
    #[serde(with = "crate::algebra::rational::serde_str")]
    pub e_p: Rational,
}

/// Evaluates the printed formulas for the log terminal stars with three
/// legs and a rational center:
/// - `(2,2,n)`: `a = 1/(kappa n - n - q_3) = 4/d`, `e_P = (n + 3)/a`;
/// - `(2,3,3)`: `a = 1/(6 kappa - 2 q_2 - 2 q_3 - 3) = 3/d`, `e_P = 7/a`;
/// - `(2,3,4)`: `a = 1/(12 kappa - 4 q_2 - 3 q_3 - 6) = 2/d`, `e_P = 8/a`;
/// - `(2,3,5)`: `a = 1/(30 kappa - 10 q_2 - 6 q_3 - 15) = 1/d`, `e_P = 9/a`;
///
/// and checks them against [`star_invariants`].
pub fn log_terminal_case_table(s: &SeifertData) -> Result<CaseTableReport> {
    let (case, den, c, m) = table_entry(s)?;
    let inv = star_invariants(s)?;
    case_table_from(s, &inv, case, den, c, m)
}

fn table_entry(s: &SeifertData) -> Result<((i64, i64, i64), i64, i64, i64)> {
    if s.genus != 0 || s.k() != 3 {
        return Err(Error::NotInTable);
    }
    let mut legs = s.legs.clone();
    legs.sort_unstable();
    let [(n1, _), (n2, q2), (n3, q3)] = legs[..] else { unreachable!() };
    let k = s.kappa;
    let (den, c, m) = match (n1, n2, n3) {
        (2, 2, n) => (k * n - n - q3, 4, n + 3),
        (2, 3, 3) => (6 * k - 2 * q2 - 2 * q3 - 3, 3, 7),
        (2, 3, 4) => (12 * k - 4 * q2 - 3 * q3 - 6, 2, 8),
        (2, 3, 5) => (30 * k - 10 * q2 - 6 * q3 - 15, 1, 9),
        _ => return Err(Error::NotInTable),
    };
    if den <= 0 {
        return Err(Error::AssertionFailure(format!("{s}: table denominator {den} is not positive")));
    }
    Ok(((n1, n2, n3), den, c, m))
}

fn case_table_from(
    s: &SeifertData,
    inv: &StarInvariants,
    case: (i64, i64, i64),
    den: i64,
    c: i64,
    m: i64,
) -> Result<CaseTableReport> {
    let a = Rational::new(BigInt::one(), BigInt::from(den));
    let e_p = Rational::from_integer(BigInt::from(m * den));
    let d: BigInt = inv.d.parse().expect("integer determinant");
    if inv.a_central != a || Rational::new(BigInt::from(c), d.clone()) != a {
        return Err(Error::AssertionFailure(format!("{s}: table gives a = {a} = {c}/d, star gives {} with d = {d}", inv.a_central)));
    }
    if inv.e_p != e_p {
        return Err(Error::AssertionFailure(format!("{s}: table gives e_P = {e_p}, star gives {}", inv.e_p)));
    }
    Ok(CaseTableReport { case, denominator: den, c, d: to_i64(&d).unwrap_or(i64::MAX), a, e_p })
}

#[derive(Clone, Debug, Serialize)]
pub struct NegativeReport {
    pub m: i64,
    /// `-E_P`.
    pub negated: String,
    /// Legs whose curve meeting `E` has zero discrepancy, with their `q_i`.
    pub zero_legs: Vec<(usize, i64)>,
}

/// For a star with `a = -1/m`: `E_P = -(sum_{j=1}^m z^(j/m)) (H(E) - k + sum D^(i))`
/// is a polynomial and `-E_P` has nonnegative Hodge-type coefficients,
/// meaning `(-1)^(p-q) b_pq >= 0` for the coefficient `b_pq` of `u^p v^q`.
pub fn negative_polynomial_check(s: &SeifertData) -> Result<NegativeReport> {
    let inv = star_invariants(s)?;
    let ac = &inv.a_central;
    let is_reciprocal = ac.is_negative() && (-ac).numer().is_one();
    if !is_reciprocal {
        return Err(Error::PreconditionNotMet(format!("central discrepancy {ac} is not of the form -1/m")));
    }
    let m = to_i64(ac.denom()).expect("small m");
    negative_polynomial_from(s, &inv, m)
}

fn negative_polynomial_from(s: &SeifertData, inv: &StarInvariants, m: i64) -> Result<NegativeReport> {
    let mut bracket = GradedPoly::curve(s.genus, s.k() as i64);
    for d in &inv.leg_determinants {
        bracket = &bracket + &GradedPoly::from_z(d.clone());
    }
    let mu = m as u64;
    let sum_j = WPoly::from_terms(mu, (1..=m).map(|j| (j, BigInt::one())));
    let product = -&EFraction::from_poly(bracket.mul_wpoly(&sum_j));
    if product != inv.e_function {
        return Err(Error::AssertionFailure(format!("{s}: product form {product} differs from E_P = {}", inv.e_function)));
    }
    let Some(p) = inv.e_function.as_polynomial() else {
        return Err(Error::AssertionFailure(format!("{s}: E_P = {} is not a polynomial", inv.e_function)));
    };
    let neg = -p;
    if !neg.sign_alternating_nonnegative() {
        return Err(Error::AssertionFailure(format!("{s}: -E_P = {neg} has a coefficient of the wrong sign")));
    }
    let mut zero_legs = Vec::new();
    let inner = &inv.central.as_ref().expect("computed with the star").leg_inner;
    for (i, &(_, q)) in s.legs.iter().enumerate() {
        if inner[i].is_zero() {
            if m != q {
                return Err(Error::AssertionFailure(format!("{s}: leg {} has zero discrepancy but a = -1/{m}, q = {q}", i + 1)));
            }
            zero_legs.push((i + 1, q));
        }
    }
    Ok(NegativeReport { m, negated: neg.to_string(), zero_legs })
}

/// Bounds of the exhaustive sweep over Seifert data.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SweepBounds {
    pub max_n: i64,
    pub max_kappa: i64,
    pub max_legs: usize,
    pub max_genus: u32,
}

impl Default for SweepBounds {
    fn default() -> Self {
        SweepBounds { max_n: 12, max_kappa: 6, max_legs: 4, max_genus: 2 }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SweepReport {
    pub members: usize,
    pub not_negative_definite: usize,
    pub strictly_log_canonical: usize,
    pub checked: usize,
    pub log_terminal: usize,
    pub log_terminal_polynomial: usize,
    pub case_table: usize,
    pub negative_reciprocal: usize,
    /// First few failures, as `data: message`.
    pub failures: Vec<String>,
    pub failure_count: usize,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

/// All legs `(n, q)` with `2 <= n <= max_n`, in lexicographic order.
pub fn all_legs(max_n: i64) -> Vec<(i64, i64)> {
    (2..=max_n).flat_map(|n| (1..n).filter(move |q| n.gcd(q) == 1).map(move |q| (n, q))).collect()
}

fn multisets(len: usize, size: usize, start: usize, cur: &mut Vec<usize>, out: &mut dyn FnMut(&[usize])) {
    out(cur);
    if cur.len() == size {
        return;
    }
    for i in start..len {
        cur.push(i);
        multisets(len, size, i, cur, out);
        cur.pop();
    }
}

/// Checks one star against every applicable identity, updating `report`.
pub fn check_star(s: &SeifertData, report: &mut SweepReport) {
    report.members += 1;
    let fail = |report: &mut SweepReport, msg: String| {
        report.failure_count += 1;
        if report.failures.len() < 20 {
            report.failures.push(format!("{s}: {msg}"));
        }
    };
    let inv = match star_invariants(s) {
        Ok(inv) => inv,
        Err(Error::NotNegativeDefinite) => {
            report.not_negative_definite += 1;
            return;
        }
        Err(Error::StrictlyLogCanonical) => {
            report.strictly_log_canonical += 1;
            return;
        }
        Err(e) => return fail(report, e.to_string()),
    };
    report.checked += 1;
    if inv.class.is_some_and(SingularityClass::is_log_terminal) {
        report.log_terminal += 1;
        match inv.e_function.as_polynomial() {
            Some(p) if p.all_coefficients_nonnegative() => report.log_terminal_polynomial += 1,
            _ => fail(report, format!("log terminal but E_P = {}", inv.e_function)),
        }
        match table_entry(s).and_then(|(case, den, c, m)| case_table_from(s, &inv, case, den, c, m)) {
            Ok(_) => report.case_table += 1,
            Err(Error::NotInTable) => {}
            Err(e) => fail(report, e.to_string()),
        }
    }
    let ac = &inv.a_central;
    if ac.is_negative() && (-ac).numer().is_one() {
        report.negative_reciprocal += 1;
        let m = to_i64(ac.denom()).expect("small m");
        if let Err(e) = negative_polynomial_from(s, &inv, m) {
            fail(report, e.to_string());
        }
    }
}

impl SweepReport {
    fn merge(&mut self, other: SweepReport) {
        self.members += other.members;
        self.not_negative_definite += other.not_negative_definite;
        self.strictly_log_canonical += other.strictly_log_canonical;
        self.checked += other.checked;
        self.log_terminal += other.log_terminal;
        self.log_terminal_polynomial += other.log_terminal_polynomial;
        self.case_table += other.case_table;
        self.negative_reciprocal += other.negative_reciprocal;
        self.failure_count += other.failure_count;
        let room = 20usize.saturating_sub(self.failures.len());
        self.failures.extend(other.failures.into_iter().take(room));
    }
}

/// Runs [`check_star`] over every Seifert datum within `bounds`, in
/// parallel; the merged report does not depend on the thread count.
pub fn star_sweep(bounds: SweepBounds) -> SweepReport {
    let legs = all_legs(bounds.max_n);
    // one unit per (genus, kappa, smallest leg), plus the leg-free stars
    let units: Vec<(u32, i64, Option<usize>)> = (0..=bounds.max_genus)
        .flat_map(|g| (1..=bounds.max_kappa).map(move |k| (g, k)))
        .flat_map(|(g, k)| {
            let firsts = if bounds.max_legs == 0 { 0 } else { legs.len() };
            std::iter::once((g, k, None)).chain((0..firsts).map(move |i| (g, k, Some(i))))
        })
        .collect();
    let parts: Vec<SweepReport> = units
        .par_iter()
        .map(|&(genus, kappa, first)| {
            let mut report = SweepReport::default();
            let mut visit = |idx: &[usize]| {
                let s = SeifertData { genus, kappa, legs: idx.iter().map(|&i| legs[i]).collect() };
                check_star(&s, &mut report);
            };
            match first {
                None => visit(&[]),
                Some(i) => multisets(legs.len(), bounds.max_legs, i, &mut vec![i], &mut visit),
            }
            report
        })
        .collect();
    let mut report = SweepReport::default();
    for part in parts {
        report.merge(part);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    fn sd(g: u32, k: i64, legs: &[(i64, i64)]) -> SeifertData {
        SeifertData::new(g, k, legs.to_vec()).unwrap()
    }

    #[test]
    fn build_examples() {
        let g = build_star(&sd(0, 2, &[(2, 1), (3, 1), (5, 1)])).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g.intersection_matrix().determinant().abs(), BigInt::from(29));
        let t = build_star(&sd(0, 1, &[(2, 1), (3, 1), (7, 1)])).unwrap();
        assert_eq!(t.intersection_matrix().determinant().abs(), BigInt::one());
        assert_eq!(build_star(&sd(0, 1, &[(2, 1), (2, 1), (2, 1)])).unwrap_err(), Error::NotNegativeDefinite);
        let leg = build_star(&sd(0, 3, &[(5, 3)])).unwrap();
        assert_eq!(leg.vertex(1).self_int, -2);
        assert_eq!(leg.vertex(2).self_int, -3);
    }

    #[test]
    fn central_examples() {
        let c = star_central_discrepancy(&sd(0, 1, &[(2, 1), (3, 1), (7, 1)])).unwrap();
        assert_eq!(c.solved, int(-1));
        assert_eq!(c.leg_inner, vec![int(0); 3]);
        let c = star_central_discrepancy(&sd(0, 2, &[(2, 1), (3, 1), (5, 1)])).unwrap();
        assert_eq!((c.quotient_form, c.determinant_form), (rat(1, 29), rat(1, 29)));
        assert!(matches!(star_central_discrepancy(&sd(1, 1, &[])), Err(Error::StrictlyLogCanonical)));
    }

    #[test]
    fn invariants_examples() {
        let t = star_invariants(&sd(0, 1, &[(2, 1), (3, 1), (7, 1)])).unwrap();
        assert_eq!(t.e_p, int(-11));
        assert_eq!(t.e_function.to_string(), "-10*u*v - u^2*v^2");
        let e8 = star_invariants(&sd(0, 2, &[(2, 1), (3, 1), (5, 1)])).unwrap();
        assert_eq!(e8.e_p, int(261));
        let single = star_invariants(&sd(0, 5, &[])).unwrap();
        assert_eq!((single.a_central, single.e_p), (rat(2, 5), int(5)));
    }

    #[test]
    fn case_table_examples() {
        let r = log_terminal_case_table(&sd(0, 2, &[(2, 1), (3, 1), (5, 1)])).unwrap();
        assert_eq!((r.a, r.e_p, r.d), (rat(1, 29), int(261), 29));
        let r = log_terminal_case_table(&sd(0, 2, &[(3, 1), (2, 1), (3, 1)])).unwrap();
        assert_eq!((r.a, r.e_p, r.d), (rat(1, 5), int(35), 15));
        let r = log_terminal_case_table(&sd(0, 2, &[(2, 1), (2, 1), (3, 1)])).unwrap();
        assert_eq!((r.a, r.e_p, r.d), (rat(1, 2), int(12), 8));
        assert!(matches!(log_terminal_case_table(&sd(0, 1, &[(2, 1), (3, 1), (7, 1)])), Err(Error::NotInTable)));
    }

    #[test]
    fn negative_examples() {
        let r = negative_polynomial_check(&sd(0, 1, &[(2, 1), (3, 1), (7, 1)])).unwrap();
        assert_eq!(r.m, 1);
        assert_eq!(r.negated, "10*u*v + u^2*v^2");
        assert!(matches!(
            negative_polynomial_check(&sd(0, 2, &[(2, 1), (3, 1), (5, 1)])),
            Err(Error::PreconditionNotMet(_))
        ));
    }

    #[test]
    fn small_sweep() {
        let r = star_sweep(SweepBounds { max_n: 5, max_kappa: 3, max_legs: 3, max_genus: 1 });
        assert!(r.passed(), "{:?}", r.failures);
        // 9 legs, multisets of size at most 3: 1 + 9 + 45 + 165
        assert_eq!(r.members, 220 * 3 * 2);
        assert!(r.negative_reciprocal > 0 && r.case_table > 0);
    }
}
