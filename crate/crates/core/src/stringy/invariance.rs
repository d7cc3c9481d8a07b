//! Invariance of `e` and `E` under blowing up a point of the exceptional
//! divisor.

use num_traits::{One, Zero};
use serde::Serialize;

use super::germ::{admissible_discrepancies, e_function_partial_sum, euler_partial_sum};
use crate::algebra::{EFraction, Rational};
use crate::classify::classify_with;
use crate::discrepancy::log_discrepancies;
use crate::error::{Error, Result};
use crate::graph::{BlowUpSite, ResolutionGraph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SiteStatus {
    Equal,
    Skipped,
}

/// Outcome at one blow-up site. `case` names the zero-discrepancy
/// configuration the site realizes:
/// 1. `E_1 ∩ E_2` with `a_1 < 0 < a_2` and `a_1 + a_2 = 0`;
/// 2. a free point of `E_1` with `a_1 = -1`;
/// 3. `E_1 ∩ E_2` where `a_1 = 0` and `E_1` also meets `E_3`;
/// 4. `E_1 ∩ E_2` where `a_1 = 0` and `E_1` meets only `E_2`;
/// 5. a free point of `E_1` where `a_1 = 0` and `E_1` meets only `E_2`.
#[derive(Clone, Debug, Serialize)]
pub struct SiteOutcome {
    pub site: String,
    pub case: Option<u8>,
    #[serde(with = "crate::algebra::rational::serde_str")]
    pub new_discrepancy: Rational,
    pub status: SiteStatus,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    #[serde(with = "crate::algebra::rational::serde_str")]
    pub euler: Rational,
    pub e_function: String,
    pub sites: Vec<SiteOutcome>,
}

impl InvarianceReport {
    pub fn checked(&self) -> usize {
        self.sites.iter().filter(|s| s.status == SiteStatus::Equal).count()
    }

    /// Case labels realized by the checked sites.
    pub fn cases(&self) -> Vec<u8> {
        let mut c: Vec<u8> =
            self.sites.iter().filter(|s| s.status == SiteStatus::Equal).filter_map(|s| s.case).collect();
        c.sort_unstable();
        c.dedup();
        c
    }
}

/// Every blow-up site of `g`: one free point per curve and one point per
/// pair of meeting curves.
pub fn blowup_sites(g: &ResolutionGraph) -> Vec<BlowUpSite> {
    let mut sites: Vec<BlowUpSite> = g.vertices().iter().map(|v| BlowUpSite::FreePoint(v.id.clone())).collect();
    for e in g.edges() {
        sites.push(BlowUpSite::IntersectionPoint(e.a.clone(), e.b.clone()));
    }
    sites
}

fn site_case(g: &ResolutionGraph, a: &[Rational], site: &BlowUpSite) -> Result<Option<u8>> {
    let zero_case = |i: usize, free: bool| {
        let distinct = g.neighbors(i).len();
        match (free, distinct, g.degree(i)) {
            (true, 1, 1) => Some(5),
            (false, 1, 1) => Some(4),
            (false, 2, 2) => Some(3),
            _ => None,
        }
    };
    Ok(match site {
        BlowUpSite::FreePoint(x) => {
            let i = g.index_of(x)?;
            if a[i] == -Rational::one() {
                Some(2)
            } else if a[i].is_zero() {
                zero_case(i, true)
            } else {
                None
            }
        }
        BlowUpSite::IntersectionPoint(x, y) => {
            let (i, j) = (g.index_of(x)?, g.index_of(y)?);
            if (&a[i] + &a[j]).is_zero() && !a[i].is_zero() {
                Some(1)
            } else if a[i].is_zero() {
                zero_case(i, false)
            } else if a[j].is_zero() {
                zero_case(j, false)
            } else {
                None
            }
        }
    })
}

/// Blows up every site of an admissible germ and asserts that `e` and `E`
/// are unchanged. Blow-ups producing a zero-discrepancy curve that meets
/// the others more than twice are skipped with a note.
pub fn check_blowup_invariance(g: &ResolutionGraph) -> Result<InvarianceReport> {
    let a = admissible_discrepancies(g)?;
    let all = vec![true; g.len()];
    let e = euler_partial_sum(g, a.values(), &all);
    let big_e = e_function_partial_sum(g, a.values(), &all)?;
    let mut sites = Vec::new();
    for site in blowup_sites(g) {
        let case = site_case(g, a.values(), &site)?;
        let (h, transported) = g.blow_up(&a, &site)?;
        let new_a = transported.value(h.len() - 1).clone();
        let solved = log_discrepancies(&h)?;
        if solved != transported {
            return Err(Error::AssertionFailure(format!(
                "{site}: transported discrepancies differ from the solved ones"
            )));
        }
        let c = classify_with(&h, &solved);
        if !c.admissible_for_stringy {
            sites.push(SiteOutcome {
                site: site.to_string(),
                case,
                new_discrepancy: new_a,
                status: SiteStatus::Skipped,
                note: Some(c.obstructions.join("; ")),
            });
            continue;
        }
        let all_h = vec![true; h.len()];
        let e2 = euler_partial_sum(&h, solved.values(), &all_h);
        if e2 != e {
            return Err(Error::AssertionFailure(format!("{site}: e changes from {e} to {e2}")));
        }
        let big_e2: EFraction = e_function_partial_sum(&h, solved.values(), &all_h)?;
        if big_e2 != big_e {
            return Err(Error::AssertionFailure(format!("{site}: E changes from {big_e} to {big_e2}")));
        }
        sites.push(SiteOutcome { site: site.to_string(), case, new_discrepancy: new_a, status: SiteStatus::Equal, note: None });
    }
    Ok(InvarianceReport { euler: e, e_function: big_e.to_string(), sites })
}
