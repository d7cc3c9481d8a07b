//! Stringy Euler number and E-function of a germ, summed over the strata of
//! the exceptional divisor. Under normal crossings only curves and
//! intersection points occur, so the sums run over vertices and edges.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::rational::{q_add, q_div, q_mul};
use crate::algebra::{EFraction, GradedPoly, Rational};
use crate::classify::{classify_with, SingularityClass};
use crate::discrepancy::{log_discrepancies, DiscrepancyVector};
use crate::error::{Error, Result};
use crate::graph::ResolutionGraph;

/// Hodge polynomials of the curves `E_i`, of the open parts `E_i°`, and
/// the number of points of each intersection `E_i ∩ E_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeCurveData {
    pub closed: Vec<GradedPoly>,
    pub open: Vec<GradedPoly>,
    pub points: Vec<(usize, usize, u32)>,
}

impl HodgeCurveData {
    pub fn of(g: &ResolutionGraph) -> Self {
        let closed = g.vertices().iter().map(|v| GradedPoly::curve(v.genus, 0)).collect();
        let open = (0..g.len())
            .map(|i| GradedPoly::curve(g.vertex(i).genus, i64::from(g.degree(i))))
            .collect();
        HodgeCurveData { closed, open, points: g.edge_indices().collect() }
    }
}

/// Discrepancies of an admissible germ, or the reason it is not admissible.
pub fn admissible_discrepancies(g: &ResolutionGraph) -> Result<DiscrepancyVector> {
    let a = log_discrepancies(g)?;
    let c = classify_with(g, &a);
    if c.class == SingularityClass::StrictlyLogCanonical {
        return Err(Error::NotAdmissible("strictly log canonical: stringy invariants undefined".into()));
    }
    if !c.admissible_for_stringy {
        return Err(Error::NotAdmissible(format!(
            "inadmissible zero-discrepancy curve: {}",
            c.obstructions.join("; ")
        )));
    }
    Ok(a)
}

/// The two discrepancies `a_i1, a_i2` of the curves met by a zero-discrepancy
/// curve, counted with multiplicity and ordered by id; a missing second
/// curve counts as `1`.
pub fn zero_curve_neighbors(g: &ResolutionGraph, a: &[Rational], i: usize) -> (Rational, Rational) {
    let mut nb: Vec<(&str, usize, u32)> = g.neighbors(i).iter().map(|&(j, m)| (g.id(j), j, m)).collect();
    nb.sort();
    let mut vals = nb.iter().flat_map(|&(_, j, m)| std::iter::repeat(a[j].clone()).take(m as usize));
    let a1 = vals.next().unwrap_or_else(Rational::one);
    let a2 = vals.next().unwrap_or_else(Rational::one);
    (a1, a2)
}

fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// `e_P` over the strata meeting `subset`: curves contribute `chi(E_i°)/a_i`,
/// intersection points `mult/(a_i a_j)`, and zero-discrepancy curves
/// `kappa_i/(a_i1 a_i2)`.
pub fn euler_partial_sum(g: &ResolutionGraph, a: &[Rational], subset: &[bool]) -> Rational {
    let mut e = Rational::zero();
    for i in (0..g.len()).filter(|&i| subset[i]) {
        let term = if a[i].is_zero() {
            let (a1, a2) = zero_curve_neighbors(g, a, i);
            q_div(&int(g.kappa(i)), &q_mul(&a1, &a2))
        } else {
            let chi = 2 - 2 * i64::from(g.vertex(i).genus) - i64::from(g.degree(i));
            q_div(&int(chi), &a[i])
        };
        e = q_add(&e, &term);
    }
    for (i, j, m) in g.edge_indices() {
        if (subset[i] || subset[j]) && !a[i].is_zero() && !a[j].is_zero() {
            e = q_add(&e, &q_div(&int(m), &q_mul(&a[i], &a[j])));
        }
    }
    e
}

/// `(z - 1)/(z^a - 1)`, kept as `1` when `a = 1`.
pub(crate) fn factor(a: &Rational) -> Result<EFraction> {
    if a.is_one() {
        Ok(EFraction::one())
    } else {
        EFraction::discrepancy_factor(a)
    }
}

/// `(z - 1)/(z^(a_i) - 1)` for every curve with `a_i != 0`.
fn factors(a: &[Rational]) -> Result<Vec<Option<EFraction>>> {
    a.iter().map(|v| if v.is_zero() { Ok(None) } else { factor(v).map(Some) }).collect()
}

fn vertex_term(
    g: &ResolutionGraph,
    a: &[Rational],
    f: &[Option<EFraction>],
    open: &GradedPoly,
    i: usize,
) -> Result<EFraction> {
    match &f[i] {
        Some(fi) => Ok(fi.mul_poly(open)),
        None => {
            let (a1, a2) = zero_curve_neighbors(g, a, i);
            let k = EFraction::from_poly(GradedPoly::constant(g.kappa(i)));
            Ok(&(&k * &factor(&a1)?) * &factor(&a2)?)
        }
    }
}

fn edge_term(f: &[Option<EFraction>], i: usize, j: usize, m: u32) -> Option<EFraction> {
    let (Some(fi), Some(fj)) = (&f[i], &f[j]) else { return None };
    Some((fi * fj).scalar_mul(&BigInt::from(m)))
}

/// `E_P` over the strata meeting `subset`.
///
/// Terms are accumulated up a breadth-first spanning tree rooted at a vertex
/// of maximal valence, reducing after every addition, so that the
/// denominators of finished branches cancel early.
pub fn e_function_partial_sum(g: &ResolutionGraph, a: &[Rational], subset: &[bool]) -> Result<EFraction> {
    let n = g.len();
    let hodge = HodgeCurveData::of(g);
    let root = (0..n).max_by_key(|&i| (g.neighbors(i).len(), std::cmp::Reverse(i))).unwrap_or(0);
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &(w, _) in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    let f = factors(a)?;
    let mut acc: Vec<EFraction> = vec![EFraction::zero(); n];
    for &v in order.iter().rev() {
        let mut s = std::mem::replace(&mut acc[v], EFraction::zero());
        if subset[v] {
            s = &s + &vertex_term(g, a, &f, &hodge.open[v], v)?;
        }
        let p = parent[v];
        if p != usize::MAX {
            if subset[v] || subset[p] {
                if let Some(t) = edge_term(&f, v, p, g.multiplicity(v, p)) {
                    s = &s + &t;
                }
            }
            acc[p] = (&acc[p] + &s.reduce()).reduce();
        } else {
            acc[v] = s;
        }
    }
    let mut total = std::mem::replace(&mut acc[root], EFraction::zero());
    for (i, j, m) in g.edge_indices() {
        if parent[i] == j || parent[j] == i || !(subset[i] || subset[j]) {
            continue;
        }
        if let Some(t) = edge_term(&f, i, j, m) {
            total = (&total + &t).reduce();
        }
    }
    Ok(total.reduce())
}

/// Stringy Euler number `e_P` of an admissible germ.
pub fn stringy_euler_germ(g: &ResolutionGraph) -> Result<Rational> {
    let a = admissible_discrepancies(g)?;
    Ok(euler_partial_sum(g, a.values(), &vec![true; g.len()]))
}

/// Stringy E-function `E_P` of an admissible germ, in reduced form.
pub fn stringy_e_function_germ(g: &ResolutionGraph) -> Result<EFraction> {
    let a = admissible_discrepancies(g)?;
    e_function_partial_sum(g, a.values(), &vec![true; g.len()])
}
