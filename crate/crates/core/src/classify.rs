//! Classification by the sign pattern of the log discrepancies, the shape of
//! non log canonical graphs, and recognition of the log canonical catalogs.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::Rational;
use crate::discrepancy::{log_discrepancies, DiscrepancyVector};
use crate::error::{Error, Result};
use crate::graph::{chain_determinants, ResolutionGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SingularityClass {
    Canonical,
    LogTerminalNonCanonical,
    StrictlyLogCanonical,
    NotLogCanonical,
}

impl SingularityClass {
    pub fn from_discrepancies(a: &[Rational]) -> Self {
        if a.iter().all(|v| *v >= Rational::one()) {
            SingularityClass::Canonical
        } else if a.iter().all(|v| v.is_positive()) {
            SingularityClass::LogTerminalNonCanonical
        } else if a.iter().all(|v| !v.is_negative()) {
            SingularityClass::StrictlyLogCanonical
        } else {
            SingularityClass::NotLogCanonical
        }
    }

    pub fn is_log_terminal(self) -> bool {
        matches!(self, SingularityClass::Canonical | SingularityClass::LogTerminalNonCanonical)
    }
}

impl fmt::Display for SingularityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub class: SingularityClass,
    pub admissible_for_stringy: bool,
    /// Curves with zero log discrepancy.
    pub zero_set: Vec<String>,
    /// Why the stringy invariants are undefined, when they are.
    pub obstructions: Vec<String>,
}

/// Classifies a germ from its discrepancies. Stringy invariants need every
/// zero-discrepancy curve to be rational, to meet the others at most twice,
/// and to meet only curves of nonzero discrepancy.
pub fn classify(g: &ResolutionGraph) -> Result<Classification> {
    let a = log_discrepancies(g)?;
    Ok(classify_with(g, &a))
}

pub fn classify_with(g: &ResolutionGraph, a: &DiscrepancyVector) -> Classification {
    let class = SingularityClass::from_discrepancies(a.values());
    let mut obstructions = Vec::new();
    if class == SingularityClass::StrictlyLogCanonical {
        obstructions.push("strictly log canonical".to_string());
    }
    let zeros: Vec<usize> = (0..g.len()).filter(|&i| a.value(i).is_zero()).collect();
    for &i in &zeros {
        let id = g.id(i);
        if g.vertex(i).genus != 0 {
            obstructions.push(format!("{id} has zero discrepancy and positive genus"));
        }
        if g.degree(i) > 2 {
            obstructions.push(format!("{id} has zero discrepancy and meets the others {} times", g.degree(i)));
        }
        for &(j, _) in g.neighbors(i) {
            if a.value(j).is_zero() {
                obstructions.push(format!("{id} and {} both have zero discrepancy", g.id(j)));
            }
        }
    }
    obstructions.dedup();
    Classification {
        class,
        admissible_for_stringy: obstructions.is_empty(),
        zero_set: zeros.iter().map(|&i| g.id(i).to_string()).collect(),
        obstructions,
    }
}

/// A chain attached to the negative part, listed outward from the attachment.
#[derive(Clone, Debug, Serialize)]
pub struct AttachedChain {
    pub attachment: String,
    #[serde(with = "crate::algebra::rational::serde_str")]
    pub attachment_discrepancy: Rational,
    pub vertices: Vec<String>,
    #[serde(with = "crate::algebra::rational::serde_str::vec")]
    pub discrepancies: Vec<Rational>,
    /// Which of the relations for `a_1 = 0` was checked, if any.
    pub zero_end_relation: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub negative_part: Vec<String>,
    pub chains: Vec<AttachedChain>,
    pub violations: Vec<String>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Decomposes the graph into `N = {a < 0}` and the remaining components and
/// records every clause of the structure theorem that fails. Never errors on
/// a violation; see [`structure_report`].
pub fn analyze_structure(g: &ResolutionGraph) -> Result<StructureReport> {
    let a = log_discrepancies(g)?;
    let n = g.len();
    let neg: Vec<bool> = (0..n).map(|i| a.value(i).is_negative()).collect();
    let mut violations = Vec::new();
    let negative_part: Vec<String> = (0..n).filter(|&i| neg[i]).map(|i| g.id(i).to_string()).collect();
    let neg_components = g.components(&neg);
    if neg_components.is_empty() {
        violations.push("negative part is empty".to_string());
    } else if neg_components.len() > 1 {
        violations.push(format!("negative part has {} connected components", neg_components.len()));
    }
    let rest: Vec<bool> = neg.iter().map(|x| !x).collect();
    let mut chains = Vec::new();
    for comp in g.components(&rest) {
        let label = comp.iter().map(|&i| g.id(i)).collect::<Vec<_>>().join(",");
        for &i in &comp {
            if g.vertex(i).genus != 0 {
                violations.push(format!("{} in chain {{{label}}} has positive genus", g.id(i)));
            }
        }
        let in_comp = |j: usize| comp.binary_search(&j).is_ok();
        let mut internal_edges = 0u32;
        let mut path_ok = true;
        for &i in &comp {
            let mut inside = 0;
            for &(j, m) in g.neighbors(i) {
                if in_comp(j) {
                    inside += m;
                    if m > 1 {
                        path_ok = false;
                    }
                }
            }
            internal_edges += inside;
            if inside > 2 {
                path_ok = false;
            }
        }
        internal_edges /= 2;
        if internal_edges as usize + 1 != comp.len() {
            path_ok = false;
        }
        if !path_ok {
            violations.push(format!("component {{{label}}} is not a simple chain"));
            continue;
        }
        let links: Vec<(usize, usize, u32)> = comp
            .iter()
            .flat_map(|&i| {
                g.neighbors(i).iter().filter(|(j, _)| neg[*j]).map(move |&(j, m)| (i, j, m))
            })
            .collect();
        let total: u32 = links.iter().map(|l| l.2).sum();
        if total != 1 {
            violations.push(format!(
                "chain {{{label}}} meets the negative part with total multiplicity {total}, not 1"
            ));
            continue;
        }
        let (first, attach, _) = links[0];
        let ends_ok = comp.len() == 1
            || g.neighbors(first).iter().filter(|(j, _)| in_comp(*j)).count() == 1;
        if !ends_ok {
            violations.push(format!("chain {{{label}}} is not attached at an end"));
            continue;
        }
        let mut order = vec![first];
        let mut prev = usize::MAX;
        let mut cur = first;
        while order.len() < comp.len() {
            let next = g
                .neighbors(cur)
                .iter()
                .map(|(j, _)| *j)
                .find(|&j| in_comp(j) && j != prev)
                .expect("path continues");
            prev = cur;
            cur = next;
            order.push(cur);
        }
        let disc: Vec<Rational> = order.iter().map(|&i| a.value(i).clone()).collect();
        let ids: Vec<String> = order.iter().map(|&i| g.id(i).to_string()).collect();
        if disc[0].is_negative() {
            violations.push(format!("{}: first discrepancy {} is negative", ids[0], disc[0]));
        }
        for w in 0..disc.len().saturating_sub(1) {
            if disc[w] >= disc[w + 1] {
                violations.push(format!(
                    "discrepancies do not increase from {} ({}) to {} ({})",
                    ids[w], disc[w], ids[w + 1], disc[w + 1]
                ));
            }
        }
        for (id, d) in ids.iter().zip(&disc) {
            if *d >= Rational::one() {
                violations.push(format!("{id}: discrepancy {d} is not below 1"));
            }
        }
        let attach_a = a.value(attach).clone();
        let mut zero_end_relation = None;
        if disc[0].is_zero() {
            let r = order.len();
            let (rel, ok) = if r == 1 {
                ("r = 1: attachment discrepancy is -1".to_string(), attach_a == -Rational::one())
            } else {
                let k2 = Rational::from_integer(BigInt::from(g.kappa(order[1])));
                let bound = -k2.recip();
                if r == 2 {
                    (format!("r = 2: attachment discrepancy is {bound}"), attach_a == bound)
                } else {
                    (format!("r > 2: attachment discrepancy exceeds {bound}"), attach_a > bound)
                }
            };
            if !ok {
                violations.push(format!("{} (attachment {} has {attach_a})", rel, g.id(attach)));
            }
            zero_end_relation = Some(rel);
        }
        chains.push(AttachedChain {
            attachment: g.id(attach).to_string(),
            attachment_discrepancy: attach_a,
            vertices: ids,
            discrepancies: disc,
            zero_end_relation,
        });
    }
    Ok(StructureReport { negative_part, chains, violations })
}

/// The structure theorem for the minimal log resolution of a non log
/// canonical germ; any failed clause is an error.
pub fn structure_report(g: &ResolutionGraph) -> Result<StructureReport> {
    let c = classify(g)?;
    if c.class != SingularityClass::NotLogCanonical {
        return Err(Error::PreconditionNotMet(format!("germ is {}, not NotLogCanonical", c.class)));
    }
    if !g.is_minimal() {
        return Err(Error::PreconditionNotMet("graph is not flagged as a minimal log resolution".into()));
    }
    let report = analyze_structure(g)?;
    if !report.passed() {
        return Err(Error::StructureViolation(report.violations));
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum LogCanonicalType {
    HjChain { n: i64, q: i64 },
    Triple(i64, i64, i64),
    SimpleElliptic,
    Cusp,
    StrictCase5(i64, i64, i64),
    StrictCase6,
    None,
}

impl LogCanonicalType {
    /// Patterns of log terminal graphs.
    pub fn is_log_terminal_pattern(&self) -> bool {
        matches!(self, LogCanonicalType::HjChain { .. } | LogCanonicalType::Triple(..))
    }

    /// Patterns of strictly log canonical graphs.
    pub fn is_strict_pattern(&self) -> bool {
        matches!(
            self,
            LogCanonicalType::SimpleElliptic
                | LogCanonicalType::Cusp
                | LogCanonicalType::StrictCase5(..)
                | LogCanonicalType::StrictCase6
        )
    }
}

impl fmt::Display for LogCanonicalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogCanonicalType::HjChain { n, q } => write!(f, "HJ_chain({n},{q})"),
            LogCanonicalType::Triple(a, b, c) => write!(f, "Triple({a},{b},{c})"),
            LogCanonicalType::SimpleElliptic => f.write_str("SimpleElliptic"),
            LogCanonicalType::Cusp => f.write_str("Cusp"),
            LogCanonicalType::StrictCase5(a, b, c) => write!(f, "StrictCase5({a},{b},{c})"),
            LogCanonicalType::StrictCase6 => f.write_str("StrictCase6"),
            LogCanonicalType::None => f.write_str("None"),
        }
    }
}

/// Walks from `start` away from `from` along degree-2 vertices; returns the
/// path if it ends at a leaf using only multiplicity-1 edges.
fn leg_from(g: &ResolutionGraph, from: usize, start: usize) -> Option<Vec<usize>> {
    let mut path = vec![start];
    let (mut prev, mut cur) = (from, start);
    loop {
        if g.neighbors(cur).iter().any(|(_, m)| *m != 1) {
            return None;
        }
        let onward: Vec<usize> = g.neighbors(cur).iter().map(|(j, _)| *j).filter(|&j| j != prev).collect();
        match onward[..] {
            [] => return Some(path),
            [next] => {
                if path.contains(&next) || next == from {
                    return None;
                }
                prev = cur;
                cur = next;
                path.push(cur);
            }
            _ => return None,
        }
    }
}

fn small(n: &BigInt) -> i64 {
    n.to_i64().unwrap_or(i64::MAX)
}

/// Matches the dual graph against the log terminal and strictly log canonical
/// catalogs. Chain, star and cycle patterns require rational curves with
/// self-intersection at most `-2`.
pub fn recognize_log_canonical_type(g: &ResolutionGraph) -> LogCanonicalType {
    let n = g.len();
    if n == 1 && g.vertex(0).genus == 1 {
        return LogCanonicalType::SimpleElliptic;
    }
    if (0..n).any(|i| g.vertex(i).genus != 0 || g.kappa(i) < 2) {
        return LogCanonicalType::None;
    }
    let simple = g.edges().iter().all(|e| e.mult == 1);
    let valence: Vec<usize> = (0..n).map(|i| g.neighbors(i).len()).collect();
    let tree = g.edges().len() + 1 == n;
    if simple && tree && valence.iter().all(|&v| v <= 2) {
        let start = (0..n).find(|&i| valence[i] <= 1).unwrap_or(0);
        let order = if n == 1 { vec![start] } else { leg_from(g, usize::MAX, start).unwrap_or_default() };
        if order.len() == n {
            let kappas: Vec<i64> = order.iter().map(|&i| g.kappa(i)).collect();
            let d = chain_determinants(&kappas);
            return LogCanonicalType::HjChain { n: small(&d.n), q: small(&d.q_prime) };
        }
    }
    if n >= 2 && (0..n).all(|i| g.degree(i) == 2) && g.euler_characteristic() == 0 {
        return LogCanonicalType::Cusp;
    }
    if !(simple && tree) {
        return LogCanonicalType::None;
    }
    let branch: Vec<usize> = (0..n).filter(|&i| valence[i] >= 3).collect();
    if branch.len() == 1 && valence[branch[0]] == 3 {
        let c = branch[0];
        let mut dets = Vec::new();
        for &(s, _) in g.neighbors(c) {
            let Some(leg) = leg_from(g, c, s) else { return LogCanonicalType::None };
            let kappas: Vec<i64> = leg.iter().map(|&i| g.kappa(i)).collect();
            dets.push(small(&chain_determinants(&kappas).n));
        }
        dets.sort_unstable();
        let t = (dets[0], dets[1], dets[2]);
        return match t {
            (2, 2, _) | (2, 3, 3) | (2, 3, 4) | (2, 3, 5) => LogCanonicalType::Triple(t.0, t.1, t.2),
            (2, 3, 6) | (2, 4, 4) | (3, 3, 3) => LogCanonicalType::StrictCase5(t.0, t.1, t.2),
            _ => LogCanonicalType::None,
        };
    }
    let is_minus_two_leaf = |i: usize| valence[i] == 1 && g.kappa(i) == 2;
    let two_leaves = |b: usize| g.neighbors(b).iter().filter(|(j, _)| is_minus_two_leaf(*j)).count() >= 2;
    if branch.len() == 1 && valence[branch[0]] == 4 {
        let b = branch[0];
        if n == 5 && g.neighbors(b).iter().all(|(j, _)| is_minus_two_leaf(*j)) {
            return LogCanonicalType::StrictCase6;
        }
    }
    if branch.len() == 2 && branch.iter().all(|&b| valence[b] == 3 && two_leaves(b)) {
        // a tree with two trivalent vertices has exactly four leaves
        return LogCanonicalType::StrictCase6;
    }
    LogCanonicalType::None
}
