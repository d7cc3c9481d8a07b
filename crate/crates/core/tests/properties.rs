mod common;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use stringy_core::algebra::matrix::cofactor_determinant;
use stringy_core::algebra::{
    check_negative_definite, poly_determinant, rat, solve_rational_system, EFraction, GradedPoly, IntMatrix,
    Rational, WPoly,
};
use stringy_core::classify::{classify, recognize_log_canonical_type, structure_report, SingularityClass};
use stringy_core::discrepancy::{
    check_bound_lemma, check_monotonicity_lemma, matrix_residuals, vertex_residuals, log_discrepancies,
};
use stringy_core::graph::{chain_determinants, chain_truncations, hj_chain, ResolutionGraph};
use stringy_core::stringy::complete::{check_duality, e_at_zero, stringy_complete_surface};
use stringy_core::stringy::invariance::blowup_sites;
use stringy_core::stringy::{
    chain_contribution, chain_direct_sum, chain_dr, check_chain_identities, check_nonnegativity,
    find_maximal_chains, stringy_e_function_germ, stringy_euler_germ, ChainContext,
};

fn int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(rows.to_vec()).unwrap()
}

fn symmetric(n: usize, entries: &[i64]) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0; n]; n];
    let mut it = entries.iter().copied();
    for i in 0..n {
        for j in i..n {
            let v = it.next().unwrap_or(0);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

fn sym_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=6).prop_flat_map(|n| prop::collection::vec(-4i64..=4, n * (n + 1) / 2).prop_map(move |e| symmetric(n, &e)))
}

/// Negative definite matrices: a random symmetric matrix with its diagonal
/// pushed below minus the absolute row sum.
fn nd_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (sym_matrix(), prop::collection::vec(1i64..=3, 6)).prop_map(|(mut m, extra)| {
        for i in 0..m.len() {
            let off: i64 = (0..m.len()).filter(|&j| j != i).map(|j| m[i][j].abs()).sum();
            m[i][i] = -off - extra[i];
        }
        m
    })
}

fn small_wpoly() -> impl Strategy<Value = WPoly> {
    prop::collection::vec((0i64..6, -2i64..=2), 0..4)
        .prop_map(|t| WPoly::from_terms(2, t.into_iter().map(|(e, c)| (e, BigInt::from(c)))))
}

fn efraction() -> impl Strategy<Value = EFraction> {
    (
        prop::collection::vec((0i64..3, small_wpoly()), 1..3),
        prop::collection::vec(prop_oneof![Just(rat(1, 2)), Just(rat(1, 1)), Just(rat(3, 2)), Just(rat(2, 3))], 0..3),
        any::<bool>(),
    )
        .prop_map(|(parts, den, pad)| {
            let mut num = GradedPoly::zero();
            for (g, p) in parts {
                num = &num + &GradedPoly::from_wpoly(g, p);
            }
            let mut den = den;
            if pad {
                // a cancelling factor: multiply the numerator by (z - 1)
                num = num.mul_wpoly(&WPoly::z_binomial(&rat(1, 1)));
                den.push(rat(1, 1));
            }
            EFraction::new(num, den).unwrap()
        })
}

fn graph_strategy(max_n: usize) -> impl Strategy<Value = ResolutionGraph> {
    any::<u64>().prop_map(move |seed| common::random_admissible(&mut common::rng(seed), max_n))
}

fn not_lc_strategy(max_n: usize) -> impl Strategy<Value = ResolutionGraph> {
    any::<u64>().prop_map(move |seed| common::random_not_lc_minimal(&mut common::rng(seed), max_n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn solve_resubstitutes(m in nd_matrix(), rhs in prop::collection::vec(-6i64..=6, 6)) {
        let a = int_matrix(&m);
        let b: Vec<Rational> = rhs[..m.len()].iter().map(|&v| rat(v, 1)).collect();
        let x = solve_rational_system(&a, &b).unwrap();
        prop_assert_eq!(a.mul_vec(&x), b);
    }

    #[test]
    fn negative_definite_agrees_with_minors(m in sym_matrix()) {
        let a = int_matrix(&m);
        let minors = a.leading_minors();
        let by_minors = minors.iter().enumerate().all(|(k, d)| if k % 2 == 0 { d.is_negative() } else { d.is_positive() });
        let nd = check_negative_definite(&a).unwrap();
        prop_assert_eq!(nd, by_minors);
        if nd {
            let n = m.len();
            // x M x^T < 0 on a grid of nonzero directions
            for code in 1..3usize.pow(n as u32) {
                let x: Vec<Rational> = (0..n).map(|i| rat(((code / 3usize.pow(i as u32)) % 3) as i64 - 1, 1)).collect();
                if x.iter().all(Zero::is_zero) {
                    continue;
                }
                let q: Rational = a.mul_vec(&x).iter().zip(&x).map(|(l, r)| l * r).sum();
                prop_assert!(q.is_negative());
            }
        }
    }

    #[test]
    fn poly_determinant_matches_cofactors(n in 1usize..=5, entries in prop::collection::vec(small_wpoly(), 25)) {
        let m: Vec<Vec<WPoly>> = (0..n).map(|i| entries[i * 5..i * 5 + n].to_vec()).collect();
        prop_assert_eq!(poly_determinant(&m).unwrap(), cofactor_determinant(&m, 2));
    }

    #[test]
    fn reduce_is_idempotent_and_preserves_values(f in efraction(), points in prop::collection::vec((-3i64..=3, 2i64..=5), 10)) {
        let r = f.reduce();
        prop_assert_eq!(r.reduce(), r.clone());
        let t = num_integer::lcm(f.scale(), r.scale());
        for (p, q) in points {
            let u = rat(p, q);
            let s = rat(q, p.abs() + 1);
            let (Some(a), Some(b)) = (f.eval(&u, &s, t), r.eval(&u, &s, t)) else { continue };
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn dualize_is_an_involution(f in efraction()) {
        prop_assert_eq!(f.dualize().dualize(), f.reduce());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn residuals_vanish(g in graph_strategy(8)) {
        let a = log_discrepancies(&g).unwrap();
        prop_assert!(matrix_residuals(&g, a.values()).iter().all(Zero::is_zero));
        prop_assert!(vertex_residuals(&g, a.values()).iter().all(Zero::is_zero));
    }

    #[test]
    fn blow_up_transports_discrepancies(g in graph_strategy(7)) {
        let a = log_discrepancies(&g).unwrap();
        for site in blowup_sites(&g) {
            let (h, transported) = g.blow_up(&a, &site).unwrap();
            prop_assert!(check_negative_definite(&h.intersection_matrix()).unwrap());
            prop_assert_eq!(log_discrepancies(&h).unwrap(), transported);
        }
    }

    #[test]
    fn classify_ignores_labels(g in graph_strategy(7), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut perm: Vec<usize> = (0..g.len()).collect();
        perm.shuffle(&mut common::rng(seed));
        let h = g.relabeled(&perm, |id| format!("v_{id}")).unwrap();
        let (c, d) = (classify(&g).unwrap(), classify(&h).unwrap());
        prop_assert_eq!(c.class, d.class);
        prop_assert_eq!(c.admissible_for_stringy, d.admissible_for_stringy);
        prop_assert_eq!(c.zero_set.len(), d.zero_set.len());
        prop_assert_eq!(stringy_euler_germ(&g).unwrap(), stringy_euler_germ(&h).unwrap());
    }

    #[test]
    fn structure_theorem(g in not_lc_strategy(8)) {
        let r = structure_report(&g);
        prop_assert!(r.is_ok(), "{}\n{:?}", g, r);
        prop_assert!(classify(&g).unwrap().admissible_for_stringy, "mislabeled input:\n{}", g);
    }

    #[test]
    fn chain_oracle(g in graph_strategy(8)) {
        let a = log_discrepancies(&g).unwrap();
        for chain in find_maximal_chains(&g) {
            let ctx = ChainContext::from_graph(&g, a.values(), &chain).unwrap();
            match chain_contribution(&ctx) {
                Ok(c) => prop_assert_eq!(c, chain_direct_sum(&g, a.values(), &chain).unwrap()),
                Err(e) => prop_assert_eq!(e, stringy_core::Error::ZeroBoundaryDiscrepancy),
            }
            if ctx.len() <= 8 {
                check_chain_identities(&ctx).unwrap();
            }
            check_nonnegativity(&ctx).unwrap();
            prop_assert_eq!(
                chain_dr(&ctx).unwrap().eval_at_one(),
                g.intersection_matrix().principal_submatrix(&chain.vertices).determinant().abs()
            );
        }
    }

    #[test]
    fn limit_is_euler(g in graph_strategy(8)) {
        let e = stringy_e_function_germ(&g).unwrap();
        prop_assert_eq!(e.limit_at_one().unwrap(), stringy_euler_germ(&g).unwrap());
    }

    #[test]
    fn complete_surfaces(seeds in prop::collection::vec(any::<u64>(), 0..3)) {
        let germs: Vec<ResolutionGraph> = seeds.iter().map(|&s| common::random_admissible(&mut common::rng(s), 5)).collect();
        let h_x = GradedPoly::from_uv_terms([(0, 0, BigInt::one()), (1, 1, BigInt::one()), (2, 2, BigInt::one())]);
        let e = stringy_complete_surface(&h_x, &germs).unwrap();
        check_duality(&e).unwrap();
        e_at_zero(&h_x, &germs).unwrap();
        let (du, dv) = e.uv_degrees().unwrap();
        prop_assert!(du <= rat(2, 1) && dv <= rat(2, 1), "degrees {} {} of {}", du, dv, e);
    }
}

#[test]
fn hj_round_trip() {
    for n in 2..=50i64 {
        for q in 1..n {
            let Ok(k) = hj_chain(n, q) else { continue };
            let d = chain_determinants(&k);
            assert_eq!((d.n, d.q_prime), (BigInt::from(n), BigInt::from(q)), "{n}/{q}");
        }
    }
}

#[test]
fn truncation_recurrence_matches_determinants() {
    for (_, _, g) in common::hj_graphs(20) {
        let kappas: Vec<i64> = (0..g.len()).map(|i| g.kappa(i)).collect();
        let d = chain_truncations(&kappas);
        for k in 1..=kappas.len() {
            let idx: Vec<usize> = (0..k).collect();
            assert_eq!(d[k], g.intersection_matrix().principal_submatrix(&idx).determinant().abs());
        }
    }
}

/// Every proper subset of corpus graphs with at most six curves, where the
/// bound `a < 1` holds.
#[test]
fn monotonicity_on_corpus() {
    let mut checked = 0;
    for (label, g) in common::corpus() {
        let n = g.len();
        if n > 6 || n < 2 {
            continue;
        }
        let a = log_discrepancies(&g).unwrap();
        if check_bound_lemma(&g, &a).is_err() {
            continue;
        }
        for mask in 1..(1u32 << n) - 1 {
            let ids: Vec<String> = (0..n).filter(|&i| mask & (1 << i) != 0).map(|i| g.id(i).to_string()).collect();
            check_monotonicity_lemma(&g, &ids).unwrap_or_else(|e| panic!("{label} {ids:?}: {e}"));
            checked += 1;
        }
    }
    assert!(checked > 100, "{checked}");
}

#[test]
fn minimal_corpus_graphs_are_below_one() {
    for (label, g) in common::corpus() {
        if !g.is_minimal() || label == "triangle237_corrupted.json" {
            continue;
        }
        let a = log_discrepancies(&g).unwrap();
        if SingularityClass::from_discrepancies(a.values()) == SingularityClass::Canonical {
            continue;
        }
        check_bound_lemma(&g, &a).unwrap_or_else(|e| panic!("{label}: {e}"));
    }
}

#[test]
fn recognizer_agrees_with_classify() {
    let mut seen = 0;
    for (label, g) in common::corpus() {
        let t = recognize_log_canonical_type(&g);
        let c = classify(&g).unwrap().class;
        if t.is_log_terminal_pattern() {
            assert!(c.is_log_terminal(), "{label}: {t} but {c}");
            seen += 1;
        }
        if t.is_strict_pattern() {
            assert_eq!(c, SingularityClass::StrictlyLogCanonical, "{label}: {t}");
            seen += 1;
        }
    }
    assert!(seen > 20);
}
