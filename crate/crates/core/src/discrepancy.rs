//! Log discrepancies from the adjunction system
//! `sum_i (a_i - 1) E_i.E_j = 2 p_a(E_j) - 2 - E_j^2`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::rational::common_denominator;
use crate::algebra::{solve_rational_system, Rational};
use crate::error::{Error, Result};
use crate::graph::ResolutionGraph;

/// Log discrepancies by vertex, in the graph's declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscrepancyVector {
    ids: Vec<String>,
    values: Vec<Rational>,
}

impl DiscrepancyVector {
    pub fn new(ids: Vec<String>, values: Vec<Rational>) -> Self {
        assert_eq!(ids.len(), values.len(), "one discrepancy per vertex");
        DiscrepancyVector { ids, values }
    }

    pub fn get(&self, id: &str) -> Option<&Rational> {
        self.ids.iter().position(|x| x == id).map(|i| &self.values[i])
    }

    pub fn value(&self, i: usize) -> &Rational {
        &self.values[i]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.ids.iter().map(String::as_str).zip(&self.values)
    }

    /// Least common multiple of the denominators (and 1).
    pub fn scale(&self) -> u64 {
        common_denominator(&self.values)
    }
}

impl Serialize for DiscrepancyVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.len()))?;
        for (id, a) in self.iter() {
            m.serialize_entry(id, &a.to_string())?;
        }
        m.end()
    }
}

impl fmt::Display for DiscrepancyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.ids.iter().map(String::len).max().unwrap_or(0);
        for (id, a) in self.iter() {
            writeln!(f, "{id:<w$}  {a}")?;
        }
        write!(f, "t = {}", self.scale())
    }
}

/// Right-hand side `2 p_a - 2 - E^2` per vertex.
fn adjunction_rhs(g: &ResolutionGraph, subset: &[usize]) -> Vec<Rational> {
    subset
        .iter()
        .map(|&j| {
            let v = g.vertex(j);
            Rational::from_integer(BigInt::from(2 * i64::from(v.genus) - 2 - v.self_int))
        })
        .collect()
}

fn solve_on(g: &ResolutionGraph, subset: &[usize]) -> Result<Vec<Rational>> {
    let m = g.intersection_matrix().principal_submatrix(subset);
    let x = solve_rational_system(&m, &adjunction_rhs(g, subset)).map_err(|e| match e {
        Error::SingularMatrix => Error::NotNegativeDefinite,
        other => other,
    })?;
    Ok(x.into_iter().map(|v| v + Rational::one()).collect())
}

/// Solves the adjunction system; the result is cached on the graph.
pub fn log_discrepancies(g: &ResolutionGraph) -> Result<DiscrepancyVector> {
    let values = match g.discrepancy_cache.get() {
        Some(v) => v.clone(),
        None => {
            let all: Vec<usize> = (0..g.len()).collect();
            let v = solve_on(g, &all)?;
            if let Some(j) = vertex_residuals(g, &v).iter().position(|r| !r.is_zero()) {
                return Err(Error::AssertionFailure(format!(
                    "adjunction residual nonzero at {}",
                    g.id(j)
                )));
            }
            g.discrepancy_cache.get_or_init(|| v).clone()
        }
    };
    Ok(DiscrepancyVector::new(g.vertices().iter().map(|v| v.id.clone()).collect(), values))
}

/// Residuals of `sum_i (a_i - 1) E_i.E_j - (2 p_a - 2 - E_j^2)` per vertex.
pub fn matrix_residuals(g: &ResolutionGraph, a: &[Rational]) -> Vec<Rational> {
    let all: Vec<usize> = (0..g.len()).collect();
    let x: Vec<Rational> = a.iter().map(|v| v - Rational::one()).collect();
    let mx = g.intersection_matrix().mul_vec(&x);
    mx.into_iter().zip(adjunction_rhs(g, &all)).map(|(l, r)| l - r).collect()
}

/// Residuals of `kappa_j a_j - sum_{i != j} (E_j.E_i)(a_i - 1) - 2 + 2 p_a(E_j)`.
pub fn vertex_residuals(g: &ResolutionGraph, a: &[Rational]) -> Vec<Rational> {
    // integer arithmetic on t * a_i
    let t = BigInt::from(common_denominator(a));
    let scaled: Vec<BigInt> = a.iter().map(|v| v.numer() * (&t / v.denom())).collect();
    (0..g.len())
        .map(|j| {
            let v = g.vertex(j);
            let mut r = &scaled[j] * g.kappa(j);
            for &(i, m) in g.neighbors(j) {
                r -= (&scaled[i] - &t) * m;
            }
            r -= &t * (2 - 2 * i64::from(v.genus));
            Rational::new(r, t.clone())
        })
        .collect()
}

/// Outcome of the bound `a_i < 1`.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub checked: usize,
    #[serde(with = "crate::algebra::rational::serde_str")]
    pub max_discrepancy: Rational,
    /// The bound is a statement about the minimal resolution; it is applied
    /// here to the declared minimal log resolution.
    pub assumption: String,
}

/// Asserts `a_i < 1` for every curve of a graph flagged as the minimal log
/// resolution of a non-canonical germ.
pub fn check_bound_lemma(g: &ResolutionGraph, a: &DiscrepancyVector) -> Result<BoundReport> {
    if !g.is_minimal() {
        return Err(Error::PreconditionNotMet("graph is not flagged as a minimal log resolution".into()));
    }
    if a.values().iter().all(|v| *v >= Rational::one()) {
        return Err(Error::PreconditionNotMet("germ is canonical".into()));
    }
    let offenders: Vec<String> = a
        .iter()
        .filter(|(_, v)| **v >= Rational::one())
        .map(|(id, v)| format!("{id} (a = {v})"))
        .collect();
    if !offenders.is_empty() {
        return Err(Error::AssertionFailure(format!(
            "discrepancies not below 1: {}",
            offenders.join(", ")
        )));
    }
    Ok(BoundReport {
        checked: a.len(),
        max_discrepancy: a.values().iter().max().cloned().unwrap_or_else(Rational::zero),
        assumption: "bound proved for the minimal resolution, applied to the declared minimal log resolution"
            .into(),
    })
}

/// Per-vertex comparison of `a_i` with the solution `a'_i` of the system
/// restricted to a proper subset.
#[derive(Clone, Debug, Serialize)]
pub struct MonotonicityReport {
    pub entries: Vec<MonotonicityEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonotonicityEntry {
    pub id: String,
    #[serde(with = "crate::algebra::rational::serde_str")]
    pub a: Rational,
    #[serde(with = "crate::algebra::rational::serde_str")]
    pub restricted: Rational,
}

/// Solves the adjunction system on the subgraph `subset` and asserts
/// `a_i < a'_i` on it.
pub fn check_monotonicity_lemma(g: &ResolutionGraph, subset: &[String]) -> Result<MonotonicityReport> {
    let mut idx = Vec::with_capacity(subset.len());
    for id in subset {
        let i = g.index_of(id)?;
        if !idx.contains(&i) {
            idx.push(i);
        }
    }
    if idx.is_empty() || idx.len() == g.len() {
        return Err(Error::PreconditionNotMet("subset must be proper and nonempty".into()));
    }
    let a = log_discrepancies(g)?;
    let restricted = solve_on(g, &idx)?;
    let entries: Vec<MonotonicityEntry> = idx
        .iter()
        .zip(restricted)
        .map(|(&i, r)| MonotonicityEntry { id: g.id(i).to_string(), a: a.value(i).clone(), restricted: r })
        .collect();
    let bad: Vec<String> = entries
        .iter()
        .filter(|e| e.a >= e.restricted)
        .map(|e| format!("{}: a = {} but a' = {}", e.id, e.a, e.restricted))
        .collect();
    if !bad.is_empty() {
        return Err(Error::AssertionFailure(bad.join(", ")));
    }
    Ok(MonotonicityReport { entries })
}
