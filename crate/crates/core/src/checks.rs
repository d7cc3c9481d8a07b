//! All identity checks that apply to one graph, run together.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::Rational;
use crate::classify::{classify_with, structure_report, SingularityClass};
use crate::discrepancy::{
    check_bound_lemma, check_monotonicity_lemma, matrix_residuals, vertex_residuals, log_discrepancies,
};
use crate::error::{Error, Result};
use crate::graph::ResolutionGraph;
use crate::stringy::{
    chain_contribution, chain_direct_sum, chain_dr, check_blowup_invariance, check_chain_identities,
    check_nonnegativity, euler_chain_contribution, find_maximal_chains, stringy_e_function_germ,
    stringy_euler_germ, ChainContext,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "SKIP",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckSuiteResult {
    pub checks: Vec<CheckOutcome>,
}

impl CheckSuiteResult {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn get(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &str, status: CheckStatus, detail: impl Into<String>) {
        self.checks.push(CheckOutcome { name: name.to_string(), status, detail: detail.into() });
    }

    fn record<T>(&mut self, name: &str, r: Result<T>, ok: impl FnOnce(T) -> String) {
        match r {
            Ok(v) => self.push(name, CheckStatus::Pass, ok(v)),
            Err(Error::PreconditionNotMet(m)) => self.push(name, CheckStatus::Skipped, m),
            Err(e) => self.push(name, CheckStatus::Fail, e.to_string()),
        }
    }
}

impl fmt::Display for CheckSuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            writeln!(f, "{}  {:<w$}  {}", c.status, c.name, c.detail)?;
        }
        let failed = self.checks.iter().filter(|c| c.status == CheckStatus::Fail).count();
        write!(f, "{} checks, {failed} failed", self.checks.len())
    }
}

/// Subsets used for the monotonicity check: all proper nonempty subsets up
/// to this size, single-vertex deletions and singletons above it.
const ALL_SUBSETS_UP_TO: usize = 6;

fn monotonicity_subsets(n: usize) -> Vec<Vec<usize>> {
    if n <= ALL_SUBSETS_UP_TO {
        (1..(1u32 << n) - 1)
            .map(|m| (0..n).filter(|&i| m & (1 << i) != 0).collect())
            .collect()
    } else {
        let mut out: Vec<Vec<usize>> = (0..n).map(|k| (0..n).filter(|&i| i != k).collect()).collect();
        out.extend((0..n).map(|i| vec![i]));
        out
    }
}

fn check_monotonicity(g: &ResolutionGraph) -> Result<String> {
    let subsets = monotonicity_subsets(g.len());
    for s in &subsets {
        let ids: Vec<String> = s.iter().map(|&i| g.id(i).to_string()).collect();
        check_monotonicity_lemma(g, &ids).map_err(|e| match e {
            Error::AssertionFailure(m) => Error::AssertionFailure(format!("on {{{}}}: {m}", ids.join(","))),
            other => other,
        })?;
    }
    Ok(format!("{} proper subsets", subsets.len()))
}

fn check_chain_oracle(g: &ResolutionGraph, a: &[Rational], ctxs: &[(String, ChainContext)]) -> Result<String> {
    let chains = find_maximal_chains(g);
    let mut compared = 0;
    let mut skipped = 0;
    for (chain, (label, ctx)) in chains.iter().zip(ctxs) {
        match chain_contribution(ctx) {
            Ok(c) => {
                let direct = chain_direct_sum(g, a, chain)?;
                if c != direct {
                    return Err(Error::AssertionFailure(format!(
                        "chain {label}: formula gives {c} but the direct sum is {direct}"
                    )));
                }
                let e = euler_chain_contribution(ctx)?;
                let lim = c.limit_at_one()?;
                if e != lim {
                    return Err(Error::AssertionFailure(format!(
                        "chain {label}: d_r/(a_0 a_r+1) = {e} but the limit of the contribution is {lim}"
                    )));
                }
                compared += 1;
            }
            Err(Error::ZeroBoundaryDiscrepancy) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    let mut detail = format!("{compared} chains agree");
    if skipped > 0 {
        detail.push_str(&format!(", {skipped} with a zero boundary skipped"));
    }
    Ok(detail)
}

fn for_each_chain<T>(
    ctxs: &[(String, ChainContext)],
    f: impl Fn(&ChainContext) -> Result<T>,
) -> Result<String> {
    for (label, ctx) in ctxs {
        f(ctx).map_err(|e| Error::AssertionFailure(format!("chain {label}: {e}")))?;
    }
    Ok(format!("{} chains", ctxs.len()))
}

/// Runs every check that applies to `g`. Failures are recorded, never
/// returned; the only error is an intersection matrix that cannot be solved.
pub fn run_check_suite(g: &ResolutionGraph) -> Result<CheckSuiteResult> {
    let mut out = CheckSuiteResult::default();
    let a = log_discrepancies(g)?;
    let nonzero = |r: Vec<Rational>| r.iter().filter(|x| !x.is_zero()).count();

    let r2 = nonzero(matrix_residuals(g, a.values()));
    let r3 = nonzero(vertex_residuals(g, a.values()));
    for (name, bad) in [("matrix_residuals", r2), ("vertex_residuals", r3)] {
        if bad == 0 {
            out.push(name, CheckStatus::Pass, format!("{} residuals vanish", g.len()));
        } else {
            out.push(name, CheckStatus::Fail, format!("{bad} nonzero residuals"));
        }
    }

    let bound = check_bound_lemma(g, &a);
    let bound_ok = bound.is_ok();
    out.record("bound_lemma", bound, |r| format!("max a = {}", r.max_discrepancy));
    if bound_ok && g.len() < 2 {
        out.push("monotonicity_lemma", CheckStatus::Skipped, "no proper nonempty subsets");
    } else if bound_ok {
        out.record("monotonicity_lemma", check_monotonicity(g), |d| d);
    } else {
        out.push("monotonicity_lemma", CheckStatus::Skipped, "needs the bound a < 1 on a minimal resolution");
    }

    let cls = classify_with(g, &a);
    if cls.class == SingularityClass::NotLogCanonical && g.is_minimal() {
        out.record("structure", structure_report(g), |r| {
            let zero_end: Vec<String> = r.chains.iter().filter_map(|c| c.zero_end_relation.clone()).collect();
            let mut d = format!("N = {{{}}}, {} chains", r.negative_part.join(","), r.chains.len());
            if !zero_end.is_empty() {
                d.push_str(&format!("; {}", zero_end.join("; ")));
            }
            d
        });
    } else {
        out.push("structure", CheckStatus::Skipped, "needs a minimal resolution of a non log canonical germ");
    }

    let chain_names = ["chain_oracle", "chain_identities", "nonnegativity", "blowup_invariance", "limit_vs_euler"];
    if !cls.admissible_for_stringy {
        for name in chain_names {
            out.push(name, CheckStatus::Skipped, format!("stringy invariants undefined: {}", cls.obstructions.join("; ")));
        }
        return Ok(out);
    }

    let ctxs: Result<Vec<(String, ChainContext)>> = find_maximal_chains(g)
        .iter()
        .map(|c| Ok((format!("{{{}}}", c.ids(g).join(",")), ChainContext::from_graph(g, a.values(), c)?)))
        .collect();
    match ctxs {
        Ok(ctxs) if ctxs.is_empty() => {
            for name in &chain_names[..3] {
                out.push(name, CheckStatus::Skipped, "no maximal chains");
            }
        }
        Ok(ctxs) => {
            out.record("chain_oracle", check_chain_oracle(g, a.values(), &ctxs), |d| d);
            out.record("chain_identities", for_each_chain(&ctxs, check_chain_identities), |d| d);
            out.record("nonnegativity", for_each_chain(&ctxs, |c| {
                check_nonnegativity(c)?;
                chain_dr(c)
            }), |d| d);
        }
        Err(e) => {
            for name in &chain_names[..3] {
                out.push(name, CheckStatus::Fail, e.to_string());
            }
        }
    }

    out.record("blowup_invariance", check_blowup_invariance(g), |r| {
        format!("{} sites equal, cases {:?}", r.checked(), r.cases())
    });

    let limit = stringy_e_function_germ(g).and_then(|e| e.limit_at_one()).and_then(|l| {
        let e = stringy_euler_germ(g)?;
        if l == e {
            Ok(format!("e = {e}"))
        } else {
            Err(Error::AssertionFailure(format!("limit of E is {l} but e = {e}")))
        }
    });
    out.record("limit_vs_euler", limit, |d| d);
    Ok(out)
}
