use std::path::PathBuf;

fn graph(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "graphs", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("stringy").chain(args.iter().copied());
    let code = stringy_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn hj_prints_chain() {
    assert_eq!(run(&["hj", "5", "3"]), (0, "2 3\n".into(), String::new()));
    let (code, _, err) = run(&["hj", "6", "3"]);
    assert_eq!(code, 1);
    assert!(err.contains("BadParameters"));
}

#[test]
fn classify_triangle() {
    let (code, out, _) = run(&["classify", &graph("triangle237.json")]);
    assert_eq!(code, 0);
    assert_eq!(out, "NotLogCanonical, admissible, Z={leg1,leg2,leg3}\n");
}

#[test]
fn euler_of_elliptic_fails() {
    let (code, out, err) = run(&["euler", &graph("elliptic.json")]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("strictly log canonical: stringy invariants undefined"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["hj", "5"]).0, 2);
    assert_eq!(run(&["efun", &graph("a53.json"), "--format", "xml"]).0, 2);
    assert_eq!(run(&["star", "--legs", "2/1"]).0, 2);
}

#[test]
fn missing_file_is_a_domain_error() {
    let (code, _, err) = run(&["euler", "/nonexistent/graph.json"]);
    assert_eq!(code, 1);
    assert!(err.contains("Io"));
}

#[test]
fn discrepancies_and_euler() {
    assert_eq!(run(&["discrepancies", &graph("a53.json")]).1, "E1  4/5\nE2  3/5\nt = 5\n");
    assert_eq!(run(&["euler", &graph("a53.json")]).1, "5\n");
    assert_eq!(run(&["euler", &graph("triangle237.json")]).1, "-11\n");
    assert_eq!(run(&["euler", &graph("star235.json")]).1, "261\n");
}

#[test]
fn efun_formats() {
    let t = graph("triangle237.json");
    assert_eq!(run(&["efun", &t]).1, "-10 u^1 v^1\n-1 u^2 v^2\n");
    let (_, latex, _) = run(&["efun", &graph("a53.json"), "--format", "latex"]);
    assert_eq!(
        latex.trim(),
        r"1 + (uv)^{\frac{3}{5}} + (uv)^{\frac{4}{5}} + (uv)^{\frac{6}{5}} + (uv)^{\frac{7}{5}}"
    );
    let (_, json, _) = run(&["efun", &t, "--format", "json"]);
    let back: stringy_core::algebra::EFraction = serde_json::from_str(&json).unwrap();
    let direct = stringy_core::stringy::stringy_e_function_germ(
        &stringy_core::graph::parse_graph(&std::fs::read_to_string(&t).unwrap()).unwrap(),
    )
    .unwrap();
    assert_eq!(back, direct);
}

#[test]
fn dr_of_a53() {
    let (code, out, _) = run(&["dr", &graph("a53.json"), "--chain", "E1,E2"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("D_2 = 1 + z^(3/5) + z^(4/5) + z^(6/5) + z^(7/5)\nD_2(1) = 5\n"), "{out}");
    let (code, _, err) = run(&["dr", &graph("triangle237.json"), "--chain", "leg1,leg2"]);
    assert_eq!(code, 1);
    assert!(err.contains("InconsistentChainData"));
}

#[test]
fn json_round_trips_discrepancies() {
    let (code, out, _) = run(&["--json", "discrepancies", &graph("triangle237.json")]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["discrepancies"]["center"], "-1");
    assert_eq!(v["discrepancies"]["leg3"], "0");
    assert_eq!(v["scale"], 1);
}

#[test]
fn json_errors() {
    let (code, _, err) = run(&["--json", "euler", &graph("elliptic.json")]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&err).unwrap();
    assert_eq!(v["error"], "NotAdmissible");
}

#[test]
fn structure_command() {
    let (code, out, _) = run(&["structure", &graph("triangle237.json")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("N = {center}\n"));
    assert!(out.ends_with("PASS\n"));
    let (code, out, _) = run(&["structure", &graph("triangle237_corrupted.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("violation: leg1b"));
    assert_eq!(run(&["structure", &graph("a53.json")]).0, 1);
}

#[test]
fn check_suite_exit_codes() {
    for name in ["a1.json", "a53.json", "a43.json", "d4.json", "e8.json", "star235.json", "triangle237.json",
        "genus2.json", "genus1_legs.json", "a53_blown.json", "cusp.json", "elliptic.json"]
    {
        let (code, out, _) = run(&["check", &graph(name)]);
        assert_eq!(code, 0, "{name}:\n{out}");
        assert!(!out.contains("FAIL"), "{name}:\n{out}");
    }
    let (code, out, _) = run(&["check", &graph("triangle237.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("PASS  structure"));
    assert!(out.contains("attachment discrepancy is -1"));

    let (code, out, _) = run(&["check", &graph("triangle237_corrupted.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL  structure"), "{out}");
}

#[test]
fn complete_fixtures() {
    let cases = [("complete_smooth.json", "1"), ("complete_a53.json", "1"), ("complete_triangle.json", "0")];
    for (name, zero) in cases {
        let (code, out, err) = run(&["complete", &graph(name)]);
        assert_eq!(code, 0, "{name}: {err}");
        assert!(out.ends_with(&format!("E(0,0) = {zero}\n")), "{name}: {out}");
    }
    let (_, out, _) = run(&["complete", &graph("complete_triangle.json")]);
    assert!(out.starts_with("E = -13*u*v\n"));
}

#[test]
fn star_single() {
    let (code, out, _) = run(&["star", "--kappa", "2", "--legs", "2/1,3/1,5/1"]);
    assert_eq!(code, 0);
    assert!(out.contains("a = 1/29\nd = 29\ne_P = 261\n"), "{out}");
    assert!(out.contains("case (2, 3, 5)"));
    let (code, out, _) = run(&["star", "--kappa", "1", "--legs", "2/1,3/1,7/1"]);
    assert_eq!(code, 0);
    assert!(out.contains("-E_P = 10*u*v + u^2*v^2"), "{out}");
    let (code, _, err) = run(&["star", "--kappa", "2", "--legs", "3/1,3/1,3/1"]);
    assert_eq!(code, 1);
    assert!(err.contains("StrictlyLogCanonical"), "{err}");
}

#[test]
fn star_small_sweep() {
    let (code, out, _) = run(&["star", "--sweep", "--max-n", "4", "--max-kappa", "2", "--max-legs", "2", "--max-genus", "1"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("failures 0"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["--json", "check", "triangle237.json"],
        vec!["invariance", "triangle237.json"],
        vec!["--json", "star", "--kappa", "2", "--legs", "2/1,3/1,5/1"],
    ] {
        let args: Vec<String> =
            args.iter().map(|a| if a.ends_with(".json") { graph(a) } else { a.to_string() }).collect();
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(run(&refs), run(&refs));
    }
}
