//! Command-line front end. [`run`] takes the arguments and output streams
//! and returns the exit code: 0 on success, 1 on a domain error or a failed
//! check, 2 on a usage error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use stringy_core::algebra::EFraction;
use stringy_core::classify::{analyze_structure, classify, SingularityClass};
use stringy_core::discrepancy::log_discrepancies;
use stringy_core::graph::{hj_chain, parse_graph, ResolutionGraph};
use stringy_core::star::{
    log_terminal_case_table, negative_polynomial_check, star_invariants, star_sweep, SeifertData, SweepBounds,
};
use stringy_core::stringy::chain::{chain_dr, check_chain_identities, ChainContext, MaximalChain};
use stringy_core::stringy::complete::{check_duality, e_at_zero, CompleteSurface};
use stringy_core::stringy::{check_blowup_invariance, stringy_e_function_germ, stringy_euler_germ};
use stringy_core::{run_check_suite, Error};

#[derive(Parser, Debug)]
#[command(name = "stringy", version, about = "Log discrepancies and stringy invariants of normal surface singularities")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EFormat {
    Json,
    Terms,
    Latex,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Log discrepancies of every curve.
    Discrepancies { file: PathBuf },
    /// Class, admissibility and zero set.
    Classify { file: PathBuf },
    /// Negative part and attached chains of a non log canonical graph.
    Structure { file: PathBuf },
    /// Stringy Euler number.
    Euler { file: PathBuf },
    /// Stringy E-function.
    Efun {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: Option<EFormat>,
    },
    /// Chain determinant D_r of a chain given by comma-separated ids.
    Dr {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        chain: Vec<String>,
    },
    /// Blow-up invariance of e and E at every site.
    Invariance { file: PathBuf },
    /// E-function of a complete surface, with duality and E(0,0).
    Complete { file: PathBuf },
    /// Star-shaped graphs from Seifert data, or a sweep over them.
    Star {
        #[arg(long, default_value_t = 0)]
        genus: u32,
        #[arg(long, required_unless_present = "sweep")]
        kappa: Option<i64>,
        /// Legs as n1/q1,n2/q2,...
        #[arg(long, default_value = "")]
        legs: String,
        #[arg(long)]
        sweep: bool,
        #[arg(long, default_value_t = 12)]
        max_n: i64,
        #[arg(long, default_value_t = 6)]
        max_kappa: i64,
        #[arg(long, default_value_t = 4)]
        max_legs: usize,
        #[arg(long, default_value_t = 2)]
        max_genus: u32,
    },
    /// Hirzebruch-Jung continued fraction of n/q.
    Hj { n: i64, q: i64 },
    /// Every applicable identity check.
    Check { file: PathBuf },
}

/// A command failure: a library error, or a failed check whose report was
/// already written.
enum Failure {
    Domain(String, String),
    Checked,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.name().to_string(), e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

struct Ctx<'a> {
    json: bool,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit(&mut self, text: impl AsRef<str>, value: impl FnOnce() -> Value) {
        let s = if self.json {
            serde_json::to_string_pretty(&value()).expect("json")
        } else {
            text.as_ref().to_string()
        };
        let _ = writeln!(self.out, "{s}");
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

/// Runs one command; `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if e.use_stderr() {
                let _ = write!(err, "{e}");
            } else {
                let _ = write!(out, "{e}");
            }
            return code;
        }
    };
    let json = cli.json;
    let mut ctx = Ctx { json, out };
    match dispatch(cli.command, &mut ctx) {
        Ok(()) => 0,
        Err(Failure::Checked) => 1,
        Err(Failure::Domain(name, msg)) => {
            if json {
                let _ = writeln!(err, "{}", json!({ "error": name, "message": msg }));
            } else {
                let _ = writeln!(err, "error[{name}]: {msg}");
            }
            1
        }
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Domain("Io".into(), format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> std::result::Result<ResolutionGraph, Failure> {
    Ok(parse_graph(&read(path)?)?)
}

fn dispatch(cmd: Command, ctx: &mut Ctx) -> Outcome {
    match cmd {
        Command::Discrepancies { file } => {
            let g = load(&file)?;
            let a = log_discrepancies(&g)?;
            ctx.emit(a.to_string(), || json!({ "discrepancies": to_value(&a), "scale": a.scale() }));
        }
        Command::Classify { file } => {
            let g = load(&file)?;
            let c = classify(&g)?;
            let mut text = format!(
                "{}, {}, Z={{{}}}",
                c.class,
                if c.admissible_for_stringy { "admissible" } else { "not admissible" },
                c.zero_set.join(",")
            );
            for o in &c.obstructions {
                text.push_str(&format!("\n  {o}"));
            }
            ctx.emit(text, || to_value(&c));
        }
        Command::Structure { file } => structure(&load(&file)?, ctx)?,
        Command::Euler { file } => {
            let e = stringy_euler_germ(&load(&file)?)?;
            ctx.emit(e.to_string(), || json!({ "e": e.to_string() }));
        }
        Command::Efun { file, format } => {
            let e = stringy_e_function_germ(&load(&file)?)?;
            let format = format.unwrap_or(if ctx.json { EFormat::Json } else { EFormat::Terms });
            let text = match format {
                EFormat::Json => serde_json::to_string_pretty(&to_value(&e)).expect("json"),
                EFormat::Terms => e_terms(&e),
                EFormat::Latex => e.to_latex(),
            };
            let _ = writeln!(ctx.out, "{text}");
        }
        Command::Dr { file, chain } => dr(&load(&file)?, &chain, ctx)?,
        Command::Invariance { file } => {
            let r = check_blowup_invariance(&load(&file)?)?;
            let mut text = format!("e = {}\nE = {}\n", r.euler, r.e_function);
            for s in &r.sites {
                text.push_str(&format!("{:<7} {}  a = {}", format!("{:?}", s.status).to_lowercase(), s.site, s.new_discrepancy));
                if let Some(c) = s.case {
                    text.push_str(&format!("  case {c}"));
                }
                if let Some(n) = &s.note {
                    text.push_str(&format!("  ({n})"));
                }
                text.push('\n');
            }
            text.push_str(&format!("{} of {} sites equal", r.checked(), r.sites.len()));
            ctx.emit(text, || to_value(&r));
        }
        Command::Complete { file } => complete(&file, ctx)?,
        Command::Star { genus, kappa, legs, sweep, max_n, max_kappa, max_legs, max_genus } => {
            if sweep {
                let r = star_sweep(SweepBounds { max_n, max_kappa, max_legs, max_genus });
                let mut text = format!(
                    "members {}\nnot negative definite {}\nstrictly log canonical {}\nchecked {}\nlog terminal {} (polynomial {})\ncase table {}\na = -1/m {}\nfailures {}",
                    r.members,
                    r.not_negative_definite,
                    r.strictly_log_canonical,
                    r.checked,
                    r.log_terminal,
                    r.log_terminal_polynomial,
                    r.case_table,
                    r.negative_reciprocal,
                    r.failure_count
                );
                for f in &r.failures {
                    text.push_str(&format!("\n  {f}"));
                }
                ctx.emit(text, || to_value(&r));
                if !r.passed() {
                    return Err(Failure::Checked);
                }
            } else {
                let s = SeifertData::new(genus, kappa.expect("required"), SeifertData::parse_legs(&legs)?)?;
                star(&s, ctx)?;
            }
        }
        Command::Hj { n, q } => {
            let k = hj_chain(n, q)?;
            let text = k.iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
            ctx.emit(text, || json!(k));
        }
        Command::Check { file } => {
            let r = run_check_suite(&load(&file)?)?;
            ctx.emit(r.to_string(), || to_value(&r));
            if !r.passed() {
                return Err(Failure::Checked);
            }
        }
    }
    Ok(())
}

/// One line per numerator term `coef u^p v^q`, then the denominator.
fn e_terms(e: &EFraction) -> String {
    let mut lines: Vec<String> =
        e.numerator_terms().iter().map(|(p, q, c)| format!("{c} u^{p} v^{q}")).collect();
    if lines.is_empty() {
        lines.push("0".into());
    }
    if !e.denominator().is_empty() {
        let den: Vec<String> = e.denominator().iter().map(|b| format!("((uv)^{b} - 1)")).collect();
        lines.push(format!("/ {}", den.join(" ")));
    }
    lines.join("\n")
}

fn structure(g: &ResolutionGraph, ctx: &mut Ctx) -> Outcome {
    let c = classify(g)?;
    if c.class != SingularityClass::NotLogCanonical {
        return Err(Error::PreconditionNotMet(format!("germ is {}, not NotLogCanonical", c.class)).into());
    }
    let r = analyze_structure(g)?;
    let mut text = format!("N = {{{}}}", r.negative_part.join(","));
    for ch in &r.chains {
        let a: Vec<String> = ch.discrepancies.iter().map(ToString::to_string).collect();
        text.push_str(&format!(
            "\nchain at {} (a = {}): {} with a = {}",
            ch.attachment,
            ch.attachment_discrepancy,
            ch.vertices.join(" - "),
            a.join(", ")
        ));
        if let Some(z) = &ch.zero_end_relation {
            text.push_str(&format!("; {z}"));
        }
    }
    if !g.is_minimal() {
        text.push_str("\nnote: graph is not flagged minimal; the theorem need not apply");
    }
    for v in &r.violations {
        text.push_str(&format!("\nviolation: {v}"));
    }
    text.push_str(if r.passed() { "\nPASS" } else { "\nFAIL" });
    ctx.emit(text, || json!({ "report": to_value(&r), "passed": r.passed(), "minimal": g.is_minimal() }));
    if r.passed() || !g.is_minimal() {
        Ok(())
    } else {
        Err(Failure::Checked)
    }
}

/// The chain through `ids`, in that order, with the curves met at its ends.
fn chain_from_ids(g: &ResolutionGraph, ids: &[String]) -> Result<MaximalChain, Error> {
    let vs = ids.iter().map(|id| g.index_of(id)).collect::<Result<Vec<_>, _>>()?;
    for w in vs.windows(2) {
        if g.multiplicity(w[0], w[1]) != 1 {
            return Err(Error::InconsistentChainData(format!("{} and {} do not meet once", g.id(w[0]), g.id(w[1]))));
        }
    }
    let outside = |v: usize| -> Vec<usize> {
        g.neighbors(v).iter().map(|&(j, _)| j).filter(|j| !vs.contains(j)).collect()
    };
    let (first, last) = (vs[0], *vs.last().expect("nonempty"));
    let (left, right) = if vs.len() == 1 {
        let o = outside(first);
        (o.first().copied(), o.get(1).copied())
    } else {
        (outside(first).first().copied(), outside(last).first().copied())
    };
    Ok(MaximalChain { vertices: vs, left, right })
}

fn dr(g: &ResolutionGraph, ids: &[String], ctx: &mut Ctx) -> Outcome {
    let a = log_discrepancies(g)?;
    let chain = chain_from_ids(g, ids)?;
    let c = ChainContext::from_graph(g, a.values(), &chain)?;
    let d = chain_dr(&c)?;
    let report = check_chain_identities(&c)?;
    let text = format!(
        "D_{} = {d}\nD_{}(1) = {}\nrecurrence checked {} times, A-claim {} times, deletion {} times",
        c.len(),
        c.len(),
        d.eval_at_one(),
        report.recurrence_checked,
        report.a_claim_checked,
        report.deletion_checked
    );
    ctx.emit(text, || {
        json!({
            "chain": ids,
            "D_r": to_value(&d),
            "value_at_one": d.eval_at_one().to_string(),
            "identities": to_value(&report),
        })
    });
    Ok(())
}

fn complete(file: &Path, ctx: &mut Ctx) -> Outcome {
    let s = CompleteSurface::parse(&read(file)?)?;
    let e = s.e_function()?;
    let duality = check_duality(&e)?;
    let zero = e_at_zero(&s.hodge_x, &s.germs)?;
    let text = format!("E = {e}\ndual E = {}\nE(0,0) = {}", duality.dual, zero.value);
    ctx.emit(text, || {
        json!({ "E": to_value(&e), "duality": to_value(&duality), "E_at_zero": to_value(&zero) })
    });
    Ok(())
}

fn star(s: &SeifertData, ctx: &mut Ctx) -> Outcome {
    let inv = star_invariants(s)?;
    let class = inv.class.map(|c| c.to_string()).unwrap_or_default();
    let mut text = format!(
        "{s}\n{class}\na = {}\nd = {}\ne_P = {}\nE_P = {}",
        inv.a_central, inv.d, inv.e_p, inv.e_function
    );
    let mut v = to_value(&inv);
    v["class"] = json!(class);
    match log_terminal_case_table(s) {
        Ok(t) => {
            text.push_str(&format!("\ncase {:?}: a = {}/d, e_P = {}", t.case, t.c, t.e_p));
            v["case_table"] = to_value(&t);
        }
        Err(Error::NotInTable) => {}
        Err(e) => return Err(e.into()),
    }
    match negative_polynomial_check(s) {
        Ok(r) => {
            text.push_str(&format!("\n-E_P = {} (a = -1/{})", r.negated, r.m));
            v["negative_polynomial"] = to_value(&r);
        }
        Err(Error::PreconditionNotMet(_)) => {}
        Err(e) => return Err(e.into()),
    }
    ctx.emit(text, || v);
    Ok(())
}
