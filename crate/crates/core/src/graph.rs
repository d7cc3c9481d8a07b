//! Dual graphs of normal-crossings resolutions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{symmetric_pivots, IntMatrix, Rational};
use crate::discrepancy::DiscrepancyVector;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveVertex {
    pub id: String,
    pub genus: u32,
    #[serde(rename = "self_intersection")]
    pub self_int: i64,
}

impl CurveVertex {
    pub fn new(id: impl Into<String>, genus: u32, self_int: i64) -> Self {
        CurveVertex { id: id.into(), genus, self_int }
    }

    pub fn rational(id: impl Into<String>, self_int: i64) -> Self {
        Self::new(id, 0, self_int)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub a: String,
    pub b: String,
    #[serde(default = "one_u32")]
    pub mult: u32,
}

fn one_u32() -> u32 {
    1
}

impl Edge {
    pub fn new(a: impl Into<String>, b: impl Into<String>, mult: u32) -> Self {
        Edge { a: a.into(), b: b.into(), mult }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphKind {
    #[default]
    Germ,
    CompleteExceptional,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainSpec {
    pub attach: String,
    pub n: i64,
    pub q: i64,
}

/// The on-disk form of a graph.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphDocument {
    #[serde(default)]
    pub kind: GraphKind,
    #[serde(default)]
    pub minimal: bool,
    pub vertices: Vec<CurveVertex>,
    #[serde(default)]
    pub edges: Vec<Edge>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub chains: Vec<ChainSpec>,
}

/// Where a point is blown up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlowUpSite {
    /// A point of one curve that lies on no other curve.
    FreePoint(String),
    /// One of the intersection points of two curves.
    IntersectionPoint(String, String),
}

impl fmt::Display for BlowUpSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlowUpSite::FreePoint(x) => write!(f, "free point on {x}"),
            BlowUpSite::IntersectionPoint(x, y) => write!(f, "intersection point {x} * {y}"),
        }
    }
}

/// A validated dual graph: connected, no self-loops, unique ids, and for germs
/// a negative definite intersection matrix.
#[derive(Debug)]
pub struct ResolutionGraph {
    vertices: Vec<CurveVertex>,
    edges: Vec<Edge>,
    kind: GraphKind,
    minimal: bool,
    index: HashMap<String, usize>,
    adj: Vec<Vec<(usize, u32)>>,
    pub(crate) discrepancy_cache: OnceLock<Vec<Rational>>,
    determinant_cache: OnceLock<BigInt>,
}

impl Clone for ResolutionGraph {
    fn clone(&self) -> Self {
        ResolutionGraph {
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
            kind: self.kind,
            minimal: self.minimal,
            index: self.index.clone(),
            adj: self.adj.clone(),
            discrepancy_cache: self.discrepancy_cache.clone(),
            determinant_cache: self.determinant_cache.clone(),
        }
    }
}

impl ResolutionGraph {
    /// Validates and builds a graph. Parallel edges between the same pair are
    /// merged by adding multiplicities.
    pub fn new(
        vertices: Vec<CurveVertex>,
        edges: Vec<Edge>,
        kind: GraphKind,
        minimal: bool,
    ) -> Result<Self> {
        let g = Self::build(vertices, edges, kind, minimal)?;
        if g.kind == GraphKind::Germ {
            let pivots = symmetric_pivots(&g.intersection_matrix());
            if pivots.len() < g.len() || !pivots.iter().all(Signed::is_negative) {
                return Err(Error::NotNegativeDefinite);
            }
            let _ = g.determinant_cache.set(pivot_product(&pivots));
        }
        Ok(g)
    }

    fn build(
        vertices: Vec<CurveVertex>,
        edges: Vec<Edge>,
        kind: GraphKind,
        minimal: bool,
    ) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Schema("graph has no vertices".into()));
        }
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.id.clone(), i).is_some() {
                return Err(Error::DuplicateId(v.id.clone()));
            }
        }
        let mut merged: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        let mut order: Vec<(usize, usize)> = Vec::new();
        for e in &edges {
            let ia = *index.get(&e.a).ok_or_else(|| Error::UnknownVertex(e.a.clone()))?;
            let ib = *index.get(&e.b).ok_or_else(|| Error::UnknownVertex(e.b.clone()))?;
            if ia == ib {
                return Err(Error::SelfLoop(e.a.clone()));
            }
            if e.mult == 0 {
                return Err(Error::Schema(format!("edge {}-{} has multiplicity 0", e.a, e.b)));
            }
            let key = (ia.min(ib), ia.max(ib));
            let entry = merged.entry(key).or_insert_with(|| {
                order.push(key);
                0
            });
            *entry += e.mult;
        }
        let mut adj = vec![Vec::new(); vertices.len()];
        let mut out_edges = Vec::with_capacity(order.len());
        for key in order {
            let m = merged[&key];
            adj[key.0].push((key.1, m));
            adj[key.1].push((key.0, m));
            out_edges.push(Edge::new(vertices[key.0].id.clone(), vertices[key.1].id.clone(), m));
        }
        let g = ResolutionGraph {
            vertices,
            edges: out_edges,
            kind,
            minimal,
            index,
            adj,
            discrepancy_cache: OnceLock::new(),
            determinant_cache: OnceLock::new(),
        };
        if g.components(&vec![true; g.len()]).len() != 1 {
            return Err(Error::DisconnectedGraph);
        }
        Ok(g)
    }

    /// A chain of rational curves `E1 - E2 - ... - Er` with self-intersections
    /// `-kappa_i`.
    pub fn chain(kappas: &[i64]) -> Result<Self> {
        let vertices =
            kappas.iter().enumerate().map(|(i, k)| CurveVertex::rational(format!("E{}", i + 1), -k)).collect();
        let edges = (1..kappas.len()).map(|i| Edge::new(format!("E{i}"), format!("E{}", i + 1), 1)).collect();
        Self::new(vertices, edges, GraphKind::Germ, true)
    }

    /// The resolution chain of the cyclic quotient singularity `A_{n,q}`.
    pub fn hirzebruch_jung(n: i64, q: i64) -> Result<Self> {
        Self::chain(&hj_chain(n, q)?)
    }

    pub fn from_document(doc: GraphDocument) -> Result<Self> {
        let mut vertices = doc.vertices;
        let mut edges = doc.edges;
        for c in &doc.chains {
            let kappas = hj_chain(c.n, c.q)?;
            let mut prev = c.attach.clone();
            for (j, k) in kappas.iter().enumerate() {
                let id = format!("{}.hj{}", c.attach, j + 1);
                vertices.push(CurveVertex::rational(id.clone(), -k));
                edges.push(Edge::new(prev, id.clone(), 1));
                prev = id;
            }
        }
        Self::new(vertices, edges, doc.kind, doc.minimal)
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            kind: self.kind,
            minimal: self.minimal,
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
            chains: Vec::new(),
        }
    }

    pub fn from_json_value(v: serde_json::Value) -> Result<Self> {
        let doc: GraphDocument =
            serde_json::from_value(v).map_err(|e| Error::Schema(e.to_string()))?;
        Self::from_document(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("graph serializes")
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    /// The user's claim that this is the minimal log resolution.
    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    pub fn with_minimal(&self, minimal: bool) -> Self {
        let mut g = self.clone();
        g.minimal = minimal;
        g
    }

    pub fn vertices(&self) -> &[CurveVertex] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &CurveVertex {
        &self.vertices[i]
    }

    pub fn id(&self, i: usize) -> &str {
        &self.vertices[i].id
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edges as index pairs `(i, j, mult)` with `i < j`.
    pub fn edge_indices(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.edges.iter().map(|e| {
            let (a, b) = (self.index[&e.a], self.index[&e.b]);
            (a.min(b), a.max(b), e.mult)
        })
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    /// Neighbors with edge multiplicities.
    pub fn neighbors(&self, i: usize) -> &[(usize, u32)] {
        &self.adj[i]
    }

    /// Total intersection multiplicity of `E_i` with the other curves.
    pub fn degree(&self, i: usize) -> u32 {
        self.adj[i].iter().map(|(_, m)| m).sum()
    }

    pub fn multiplicity(&self, i: usize, j: usize) -> u32 {
        self.adj[i].iter().find(|(k, _)| *k == j).map(|(_, m)| *m).unwrap_or(0)
    }

    /// `kappa_i = -E_i^2`.
    pub fn kappa(&self, i: usize) -> i64 {
        -self.vertices[i].self_int
    }

    /// Symmetric matrix of intersection numbers, in declaration order.
    pub fn intersection_matrix(&self) -> IntMatrix {
        let n = self.len();
        let mut m = IntMatrix::zeros(n);
        for (i, v) in self.vertices.iter().enumerate() {
            m.set(i, i, BigInt::from(v.self_int));
        }
        for (i, j, mult) in self.edge_indices() {
            m.set(i, j, BigInt::from(mult));
            m.set(j, i, BigInt::from(mult));
        }
        m
    }

    /// Determinant of the intersection matrix.
    pub fn determinant(&self) -> BigInt {
        self.determinant_cache
            .get_or_init(|| {
                let m = self.intersection_matrix();
                let pivots = symmetric_pivots(&m);
                if pivots.len() == m.dim() {
                    pivot_product(&pivots)
                } else {
                    m.determinant()
                }
            })
            .clone()
    }

    /// Number of vertices minus number of edges counted with multiplicity.
    pub fn euler_characteristic(&self) -> i64 {
        self.len() as i64 - self.edges.iter().map(|e| i64::from(e.mult)).sum::<i64>()
    }

    /// Connected components of the subgraph induced on `mask`, each sorted.
    pub fn components(&self, mask: &[bool]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if !mask[s] || seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut k = 0;
            while k < comp.len() {
                let v = comp[k];
                for &(w, _) in &self.adj[v] {
                    if mask[w] && !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                k += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Genus-0 `(-1)`-curves that look contractible: they meet at most two
    /// other curves, each transversally once.
    pub fn minimality_warnings(&self) -> Vec<String> {
        (0..self.len())
            .filter(|&i| {
                let v = &self.vertices[i];
                v.genus == 0
                    && v.self_int == -1
                    && self.degree(i) <= 2
                    && self.adj[i].iter().all(|(_, m)| *m == 1)
            })
            .map(|i| {
                format!("{} is a rational (-1)-curve meeting at most two others once", self.id(i))
            })
            .collect()
    }

    /// Blows up a point, transporting discrepancies: the new curve gets
    /// `a_1 + 1` at a free point of `E_1` and `a_1 + a_2` at a point of
    /// `E_1 * E_2`. The result is never flagged minimal.
    pub fn blow_up(
        &self,
        a: &DiscrepancyVector,
        site: &BlowUpSite,
    ) -> Result<(ResolutionGraph, DiscrepancyVector)> {
        let mut vertices = self.vertices.clone();
        let mut edges: Vec<Edge> = self.edges.clone();
        let mut values: Vec<Rational> = (0..self.len()).map(|i| a.value(i).clone()).collect();
        let (new_id, new_a) = match site {
            BlowUpSite::FreePoint(x) => {
                let i = self.index_of(x).map_err(|_| Error::InvalidSite(site.to_string()))?;
                vertices[i].self_int -= 1;
                let id = self.fresh_id(&format!("bl[{x}]"));
                edges.push(Edge::new(x.clone(), id.clone(), 1));
                (id, &values[i] + Rational::one())
            }
            BlowUpSite::IntersectionPoint(x, y) => {
                let i = self.index_of(x).map_err(|_| Error::InvalidSite(site.to_string()))?;
                let j = self.index_of(y).map_err(|_| Error::InvalidSite(site.to_string()))?;
                if self.multiplicity(i, j) == 0 {
                    return Err(Error::InvalidSite(format!("{x} and {y} do not meet")));
                }
                vertices[i].self_int -= 1;
                vertices[j].self_int -= 1;
                let pos = edges
                    .iter()
                    .position(|e| (e.a == *x && e.b == *y) || (e.a == *y && e.b == *x))
                    .expect("edge exists");
                if edges[pos].mult == 1 {
                    edges.remove(pos);
                } else {
                    edges[pos].mult -= 1;
                }
                let id = self.fresh_id(&format!("bl[{x}|{y}]"));
                edges.push(Edge::new(x.clone(), id.clone(), 1));
                edges.push(Edge::new(y.clone(), id.clone(), 1));
                (id, &values[i] + &values[j])
            }
        };
        vertices.push(CurveVertex::rational(new_id, -1));
        values.push(new_a);
        let g = ResolutionGraph::new(vertices, edges, self.kind, false)?;
        let ids = g.vertices.iter().map(|v| v.id.clone()).collect();
        Ok((g, DiscrepancyVector::new(ids, values)))
    }

    fn fresh_id(&self, base: &str) -> String {
        if !self.index.contains_key(base) {
            return base.to_string();
        }
        (2..).map(|k| format!("{base}#{k}")).find(|s| !self.index.contains_key(s)).unwrap()
    }

    /// The same graph with vertices declared in the order `perm` (a
    /// permutation of indices) and ids renamed by `rename`.
    pub fn relabeled(&self, perm: &[usize], rename: impl Fn(&str) -> String) -> Result<Self> {
        let vertices = perm
            .iter()
            .map(|&i| {
                let v = &self.vertices[i];
                CurveVertex::new(rename(&v.id), v.genus, v.self_int)
            })
            .collect();
        let edges = self.edges.iter().map(|e| Edge::new(rename(&e.a), rename(&e.b), e.mult)).collect();
        Self::new(vertices, edges, self.kind, self.minimal)
    }
}

/// Parses a graph from JSON text.
pub fn parse_graph(document: &str) -> Result<ResolutionGraph> {
    let doc: GraphDocument =
        serde_json::from_str(document).map_err(|e| Error::Schema(e.to_string()))?;
    ResolutionGraph::from_document(doc)
}

/// Continued fraction `n/q = k_1 - 1/(k_2 - 1/(... - 1/k_r))` with all
/// `k_i >= 2`.
pub fn hj_chain(n: i64, q: i64) -> Result<Vec<i64>> {
    if !(0 < q && q < n) || n.gcd(&q) != 1 {
        return Err(Error::BadParameters { n, q });
    }
    let (mut a, mut b) = (n, q);
    let mut out = Vec::new();
    while b != 0 {
        // ceiling division
        let k = (a + b - 1) / b;
        out.push(k);
        let r = k * b - a;
        a = b;
        b = r;
    }
    Ok(out)
}

/// Determinants attached to a chain `E_1 - ... - E_r` with `E_i^2 = -k_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainDeterminants {
    /// `|det|` of the whole chain.
    pub n: BigInt,
    /// `|det|` with the last curve deleted.
    pub q: BigInt,
    /// `|det|` with the first curve deleted.
    pub q_prime: BigInt,
}

fn pivot_product(pivots: &[Rational]) -> BigInt {
    let d = pivots.iter().fold(Rational::one(), |acc, p| acc * p);
    debug_assert!(d.is_integer());
    d.to_integer()
}

/// Truncation determinants `d_k = k_k d_{k-1} - d_{k-2}` with `d_0 = 1`,
/// `d_{-1} = 0`.
pub fn chain_truncations(kappas: &[i64]) -> Vec<BigInt> {
    let mut d = vec![BigInt::one()];
    let mut before = BigInt::zero();
    for k in kappas {
        let next = BigInt::from(*k) * d.last().unwrap() - &before;
        before = d.last().unwrap().clone();
        d.push(next);
    }
    d
}

pub fn chain_determinants(kappas: &[i64]) -> ChainDeterminants {
    let fwd = chain_truncations(kappas);
    let rev: Vec<i64> = kappas.iter().rev().copied().collect();
    let bwd = chain_truncations(&rev);
    let r = kappas.len();
    ChainDeterminants {
        n: fwd[r].abs(),
        q: if r == 0 { BigInt::zero() } else { fwd[r - 1].abs() },
        q_prime: if r == 0 { BigInt::zero() } else { bwd[r - 1].abs() },
    }
}

impl fmt::Display for ResolutionGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.vertices {
            writeln!(f, "{} g={} E^2={}", v.id, v.genus, v.self_int)?;
        }
        for e in &self.edges {
            if e.mult == 1 {
                writeln!(f, "{} -- {}", e.a, e.b)?;
            } else {
                writeln!(f, "{} -- {} (x{})", e.a, e.b, e.mult)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hj_examples() {
        assert_eq!(hj_chain(2, 1).unwrap(), vec![2]);
        assert_eq!(hj_chain(5, 3).unwrap(), vec![2, 3]);
        assert_eq!(hj_chain(7, 1).unwrap(), vec![7]);
        assert_eq!(hj_chain(4, 3).unwrap(), vec![2, 2, 2]);
        assert_eq!(hj_chain(6, 4), Err(Error::BadParameters { n: 6, q: 4 }));
        assert_eq!(hj_chain(5, 5), Err(Error::BadParameters { n: 5, q: 5 }));
    }

    #[test]
    fn chain_determinant_examples() {
        let d = chain_determinants(&[2]);
        assert_eq!((d.n, d.q), (BigInt::from(2), BigInt::from(1)));
        let d = chain_determinants(&[2, 3]);
        assert_eq!((d.n, d.q, d.q_prime), (5.into(), 2.into(), 3.into()));
        let d = chain_determinants(&[2, 2, 2]);
        assert_eq!((d.n, d.q, d.q_prime), (4.into(), 3.into(), 3.into()));
    }

    #[test]
    fn parse_examples() {
        let g = parse_graph(r#"{"vertices":[{"id":"E1","genus":0,"self_intersection":-2}],"edges":[]}"#)
            .unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.intersection_matrix(), IntMatrix::from_rows(vec![vec![-2]]).unwrap());

        let g = parse_graph(
            r#"{"vertices":[{"id":"E0","genus":0,"self_intersection":-3}],
                "chains":[{"attach":"E0","n":5,"q":3}]}"#,
        )
        .unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.vertex(1).id, "E0.hj1");
        assert_eq!(g.vertex(1).self_int, -2);
        assert_eq!(g.vertex(2).self_int, -3);
        assert_eq!(g.multiplicity(0, 1), 1);

        let err = parse_graph(
            r#"{"vertices":[{"id":"a","genus":0,"self_intersection":-1},
                            {"id":"b","genus":0,"self_intersection":-1}],
                "edges":[{"a":"a","b":"b"}]}"#,
        );
        assert_eq!(err.unwrap_err(), Error::NotNegativeDefinite);
    }

    #[test]
    fn validation_errors() {
        let v = |id: &str| CurveVertex::rational(id, -2);
        let dup = ResolutionGraph::new(vec![v("a"), v("a")], vec![], GraphKind::Germ, false);
        assert_eq!(dup.unwrap_err(), Error::DuplicateId("a".into()));
        let lp = ResolutionGraph::new(vec![v("a")], vec![Edge::new("a", "a", 1)], GraphKind::Germ, false);
        assert_eq!(lp.unwrap_err(), Error::SelfLoop("a".into()));
        let disc = ResolutionGraph::new(vec![v("a"), v("b")], vec![], GraphKind::Germ, false);
        assert_eq!(disc.unwrap_err(), Error::DisconnectedGraph);
        let unk = ResolutionGraph::new(vec![v("a")], vec![Edge::new("a", "x", 1)], GraphKind::Germ, false);
        assert_eq!(unk.unwrap_err(), Error::UnknownVertex("x".into()));
        assert!(matches!(parse_graph("{\"vertices\": 3}"), Err(Error::Schema(_))));
    }

    #[test]
    fn intersection_matrices() {
        let g = ResolutionGraph::chain(&[2, 3]).unwrap();
        assert_eq!(g.intersection_matrix(), IntMatrix::from_rows(vec![vec![-2, 1], vec![1, -3]]).unwrap());
        let cyc = ResolutionGraph::new(
            vec![CurveVertex::rational("a", -3), CurveVertex::rational("b", -3)],
            vec![Edge::new("a", "b", 2)],
            GraphKind::Germ,
            false,
        )
        .unwrap();
        assert_eq!(cyc.intersection_matrix(), IntMatrix::from_rows(vec![vec![-3, 2], vec![2, -3]]).unwrap());
        assert_eq!(cyc.euler_characteristic(), 0);
    }

    #[test]
    fn blow_up_bookkeeping() {
        let cyc = ResolutionGraph::new(
            vec![CurveVertex::rational("a", -3), CurveVertex::rational("b", -3)],
            vec![Edge::new("a", "b", 2)],
            GraphKind::Germ,
            false,
        )
        .unwrap();
        let a = DiscrepancyVector::new(vec!["a".into(), "b".into()], vec![Rational::zero(), Rational::zero()]);
        let site = BlowUpSite::IntersectionPoint("a".into(), "b".into());
        let (g, _) = cyc.blow_up(&a, &site).unwrap();
        assert_eq!(g.multiplicity(0, 1), 1);
        assert_eq!(g.len(), 3);
        assert_eq!(g.degree(2), 2);
        assert_eq!(g.vertex(0).self_int, -4);
        let bad = BlowUpSite::IntersectionPoint("a".into(), "zz".into());
        assert!(matches!(cyc.blow_up(&a, &bad), Err(Error::InvalidSite(_))));
    }
}
