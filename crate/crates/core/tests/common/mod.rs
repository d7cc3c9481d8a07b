#![allow(dead_code)]

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stringy_core::classify::{classify, SingularityClass};
use stringy_core::discrepancy::log_discrepancies;
use stringy_core::graph::{hj_chain, parse_graph, CurveVertex, Edge, GraphKind, ResolutionGraph};
use stringy_core::stringy::invariance::blowup_sites;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture_path(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "graphs", name].iter().collect()
}

pub fn fixture(name: &str) -> ResolutionGraph {
    parse_graph(&std::fs::read_to_string(fixture_path(name)).expect("fixture")).expect("valid fixture")
}

/// Germ fixtures that parse as graphs.
pub const GRAPH_FIXTURES: &[&str] = &[
    "a1.json",
    "a43.json",
    "a53.json",
    "a53_blown.json",
    "cusp.json",
    "d4.json",
    "e8.json",
    "elliptic.json",
    "genus1_legs.json",
    "genus2.json",
    "star235.json",
    "triangle237.json",
    "triangle237_corrupted.json",
];

/// A random tree on `n` vertices with `kappa(i, degree, genus)` choosing
/// the self-intersections; `None` if not negative definite.
pub fn random_tree(
    rng: &mut ChaCha8Rng,
    n: usize,
    genus_odds: f64,
    mut kappa: impl FnMut(&mut ChaCha8Rng, u32, u32) -> i64,
    minimal: bool,
) -> Option<ResolutionGraph> {
    let parents: Vec<usize> = (1..n).map(|i| rng.gen_range(0..i)).collect();
    let mut degree = vec![0u32; n];
    for (i, &p) in parents.iter().enumerate() {
        degree[i + 1] += 1;
        degree[p] += 1;
    }
    let vertices: Vec<CurveVertex> = (0..n)
        .map(|i| {
            let genus = if rng.gen_bool(genus_odds) { rng.gen_range(1..=2) } else { 0 };
            let k = kappa(rng, degree[i], genus);
            CurveVertex::new(format!("E{}", i + 1), genus, -k)
        })
        .collect();
    let edges: Vec<Edge> =
        parents.iter().enumerate().map(|(i, &p)| Edge::new(format!("E{}", p + 1), format!("E{}", i + 2), 1)).collect();
    ResolutionGraph::new(vertices, edges, GraphKind::Germ, minimal).ok()
}

/// A random admissible germ with at most `max_n` curves; about a third are
/// blow-ups of another random admissible germ, which brings in curves of
/// zero discrepancy.
pub fn random_admissible(rng: &mut ChaCha8Rng, max_n: usize) -> ResolutionGraph {
    loop {
        let n = rng.gen_range(1..=max_n);
        let Some(g) = random_tree(rng, n, 0.15, |r, _, _| r.gen_range(1..=5), false) else { continue };
        let Ok(c) = classify(&g) else { continue };
        if !c.admissible_for_stringy {
            continue;
        }
        if g.len() < max_n && rng.gen_bool(0.35) {
            let a = log_discrepancies(&g).unwrap();
            let site = blowup_sites(&g).choose(rng).unwrap().clone();
            let (h, _) = g.blow_up(&a, &site).unwrap();
            if classify(&h).is_ok_and(|c| c.admissible_for_stringy) {
                return h;
            }
            continue;
        }
        return g;
    }
}

/// A random minimal log resolution of a non log canonical germ: no
/// rational `(-1)`-curve meets fewer than three others.
pub fn random_not_lc_minimal(rng: &mut ChaCha8Rng, max_n: usize) -> ResolutionGraph {
    loop {
        let n = rng.gen_range(1..=max_n);
        let kappa = |r: &mut ChaCha8Rng, degree: u32, genus: u32| {
            let low = if genus == 0 && degree < 3 { 2 } else { 1 };
            r.gen_range(low..=low + 3)
        };
        let Some(g) = random_tree(rng, n, 0.2, kappa, true) else { continue };
        if classify(&g).is_ok_and(|c| c.class == SingularityClass::NotLogCanonical) {
            return g;
        }
    }
}

/// Hirzebruch-Jung chains for `2 <= n <= max_n`.
pub fn hj_graphs(max_n: i64) -> Vec<(i64, i64, ResolutionGraph)> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        for q in 1..n {
            if let Ok(k) = hj_chain(n, q) {
                out.push((n, q, ResolutionGraph::chain(&k).unwrap()));
            }
        }
    }
    out
}

/// Fixtures, small chains and random graphs, each with a label.
pub fn corpus() -> Vec<(String, ResolutionGraph)> {
    let mut out: Vec<(String, ResolutionGraph)> =
        GRAPH_FIXTURES.iter().map(|f| (f.to_string(), fixture(f))).collect();
    for (n, q, g) in hj_graphs(12) {
        out.push((format!("A({n},{q})"), g));
    }
    let mut r = rng(7);
    for i in 0..60 {
        out.push((format!("admissible#{i}"), random_admissible(&mut r, 7)));
    }
    for i in 0..40 {
        out.push((format!("not-lc#{i}"), random_not_lc_minimal(&mut r, 7)));
    }
    out
}
