use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use braidrep_core::analysis::{
    conjugate, find_invariant_covector, find_invariant_vector, forbidden_audit, kernel_witness, sampled_irreducibility,
    DiagonalConjugator, WitnessOptions,
};
use braidrep_core::classifier::{classify, sampling_cross_check, ClassifierError, SolveOptions};
use braidrep_core::lkb::{compare_t1, lkb_variant, LkbVariant};
use braidrep_core::localrep::{
    builtin_catalog, verify_representation, ExplicitJson, ExplicitRep, Rep, VerificationReport,
};
use braidrep_core::presentations::{build_presentation, Group, Presentation};
use braidrep_core::symalg::{RationalFunction, Variable};
use braidrep_core::{par, SCHEMA_VERSION};

/// Exit status for a check that ran but did not establish its property.
const EXIT_FAILED: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "braidrep", version, about = "Local representations of braid, virtual and welded braid groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Markdown)]
    format: Format,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the relations of a presentation.
    Present {
        #[arg(long)]
        group: String,
        #[arg(short, default_value_t = 3)]
        n: usize,
        #[arg(short, default_value_t = 1)]
        k: usize,
        /// Also list the relations that do not hold in the group.
        #[arg(long)]
        show_forbidden: bool,
    },
    /// Check a representation against a presentation.
    Verify {
        #[command(flatten)]
        rep: RepArgs,
        /// Presentation to check against; defaults to the family's own group.
        #[arg(long)]
        group: Option<String>,
    },
    /// Solve the block equations and match the solutions to the catalog.
    Classify {
        #[arg(long)]
        group: String,
        #[arg(short, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 10_000)]
        branch_cap: usize,
        /// Random points per run checked against the full presentation.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        /// Strand counts for the sampled check.
        #[arg(long, value_delimiter = ',', default_value = "3,4,5")]
        strands: Vec<usize>,
    },
    /// Irreducibility, invariant vectors, kernel words and forbidden moves.
    Analyze {
        #[command(flatten)]
        rep: RepArgs,
        #[arg(long, value_enum)]
        check: Check,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        /// Longest word tried by the kernel search.
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        /// `geometric:<u>` for diag(u^(1-n), ..., 1), or `diag:<e1>,<e2>,...`.
        #[arg(long)]
        conjugator: Option<String>,
    },
    /// The Lawrence-Krammer-Bigelow representation and its welded versions.
    Lkb {
        #[arg(long, default_value = "full")]
        variant: String,
        #[arg(short, default_value_t = 3)]
        n: usize,
        #[arg(long, value_enum, default_value_t = LkbCheck::Relations)]
        check: LkbCheck,
        /// Parameter values, e.g. `q=2,b=3`.
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
}

#[derive(clap::Args, Debug)]
struct RepArgs {
    /// Catalog name (`beta7`, `zeta3`, `burau`, `mvb(anti;swap)`, ...).
    #[arg(long, required_unless_present = "rep_file")]
    family: Option<String>,
    /// An explicit representation in JSON.
    #[arg(long, conflicts_with = "family")]
    rep_file: Option<PathBuf>,
    #[arg(short, default_value_t = 3)]
    n: usize,
    #[arg(short, default_value_t = 2)]
    k: usize,
    /// Parameter values, e.g. `b=2,c=1`.
    #[arg(long, default_value = "")]
    params: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    Irreducible,
    Reducible,
    Witness,
    Forbidden,
    Conjugate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum LkbCheck {
    Relations,
    T1,
    Irreducible,
    Witness,
    Export,
}

/// An input error, reported with exit code 2.
#[derive(Debug)]
struct Invalid(String);

impl std::fmt::Display for Invalid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Invalid {}

fn invalid(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(Invalid(msg.into()))
}

struct Outcome {
    json: Value,
    markdown: String,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = std::env::var("BRAIDREP_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if t > 0 {
            par::init_threads(t);
        }
    }
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable")),
                Format::Markdown => print!("{}", out.markdown),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAILED)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if let Some(ClassifierError::BudgetExceeded(_)) = e.downcast_ref::<ClassifierError>() {
                ExitCode::from(EXIT_BUDGET)
            } else {
                ExitCode::from(EXIT_INVALID)
            }
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Present { group, n, k, show_forbidden } => cmd_present(group, *n, *k, *show_forbidden),
        Command::Verify { rep, group } => cmd_verify(rep, group.as_deref()),
        Command::Classify { group, k, branch_cap, samples, strands } => {
            cmd_classify(group, *k, *branch_cap, *samples, strands, cli.seed)
        }
        Command::Analyze { rep, check, samples, max_len, conjugator } => {
            cmd_analyze(rep, *check, *samples, *max_len, conjugator.as_deref(), cli.seed)
        }
        Command::Lkb { variant, n, check, params, samples, max_len } => {
            cmd_lkb(variant, *n, *check, params, *samples, *max_len, cli.seed)
        }
    }
}

fn envelope(command: &str, body: Value) -> Value {
    let mut v = json!({ "schema": SCHEMA_VERSION, "command": command });
    if let (Value::Object(m), Value::Object(b)) = (&mut v, body) {
        m.extend(b);
    }
    v
}

fn parse_group(s: &str) -> Result<Group> {
    s.parse().map_err(|_| invalid(format!("unknown group {s:?} (b, vb, mvb, mwb, mub)")))
}

fn presentation(group: Group, n: usize, k: usize) -> Result<Presentation> {
    build_presentation(group, n, k).map_err(|e| invalid(e.to_string()))
}

fn parse_params(s: &str) -> Result<BTreeMap<Variable, RationalFunction>> {
    let mut out = BTreeMap::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (name, value) =
            item.split_once('=').ok_or_else(|| invalid(format!("expected name=value, got {item:?}")))?;
        let v = RationalFunction::parse(value.trim()).map_err(|e| invalid(format!("{item}: {e}")))?;
        out.insert(Variable::new(name.trim()), v);
    }
    Ok(out)
}

/// Substitutes `params`, rejecting values that violate a side condition.
fn specialize(rep: Rep, params: &BTreeMap<Variable, RationalFunction>) -> Result<Rep> {
    if params.is_empty() {
        return Ok(rep);
    }
    let known = rep.parameters();
    for v in params.keys() {
        if !known.contains(&v.to_string()) {
            return Err(invalid(format!("{} has no parameter {v}", rep.name())));
        }
    }
    for c in rep.side_conditions() {
        let s = c.substitute(params).map_err(|e| invalid(format!("{c}: {e}")))?;
        if s.is_zero() {
            return Err(invalid(format!("parameters violate the side condition {c} != 0")));
        }
    }
    rep.substitute(params).map_err(|e| invalid(e.to_string()))
}

fn load_rep(args: &RepArgs) -> Result<Rep> {
    let rep = match (&args.family, &args.rep_file) {
        (Some(name), _) => builtin_catalog(name, args.n, args.k).map_err(|e| invalid(e.to_string()))?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let j: ExplicitJson =
                serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
            Rep::Explicit(ExplicitRep::from_json(&j).map_err(|e| invalid(e.to_string()))?)
        }
        (None, None) => bail!(invalid("need --family or --rep-file")),
    };
    specialize(rep, &parse_params(&args.params)?)
}

fn cmd_present(group: &str, n: usize, k: usize, show_forbidden: bool) -> Result<Outcome> {
    let pres = presentation(parse_group(group)?, n, k)?;
    let mut pj = serde_json::to_value(pres.to_json())?;
    if !show_forbidden {
        if let Value::Object(m) = &mut pj {
            m.remove("forbidden");
        }
    }
    let mut md = format!("## {}\n\nrelations: {}\n\n", pres.label(), pres.relations.len());
    for r in &pres.relations {
        let _ = writeln!(md, "- ({}) {}", r.tag, r);
    }
    if show_forbidden {
        let _ = writeln!(md, "\nforbidden:\n");
        for r in &pres.forbidden {
            let _ = writeln!(md, "- ({}) {}", r.tag, r);
        }
    }
    Ok(Outcome { json: envelope("present", json!({ "presentation": pj })), markdown: md, ok: true })
}

fn verification_markdown(r: &VerificationReport) -> String {
    let mut md = format!(
        "## {} on {}\n\n{}: {} of {} relations hold\n",
        r.representation,
        r.presentation,
        if r.pass { "pass" } else { "FAIL" },
        r.checked - r.failed,
        r.checked
    );
    if !r.side_conditions.is_empty() {
        let _ = writeln!(md, "\nvalid for {}", r.side_conditions.join(", "));
    }
    for c in r.relations.iter().filter(|c| !c.holds) {
        let _ = writeln!(md, "- fails ({}) {}", c.tag, c.relation);
    }
    md
}

fn cmd_verify(args: &RepArgs, group: Option<&str>) -> Result<Outcome> {
    let rep = load_rep(args)?;
    let g = group.map(parse_group).transpose()?.unwrap_or(rep.group());
    let pres = presentation(g, rep.n(), rep.k())?;
    let report = verify_representation(&rep, &pres)?;
    Ok(Outcome {
        json: envelope("verify", json!({ "report": report })),
        markdown: verification_markdown(&report),
        ok: report.pass,
    })
}

fn cmd_classify(group: &str, k: usize, cap: usize, samples: usize, strands: &[usize], seed: u64) -> Result<Outcome> {
    if cap == 0 {
        bail!(invalid("--branch-cap must be positive"));
    }
    let c = classify(parse_group(group)?, k, &SolveOptions { branch_cap: cap })?;
    let mut report = serde_json::to_value(c.report())?;
    let mut md = c.to_markdown();
    let mut ok = c.bijection();
    if samples > 0 {
        let s = sampling_cross_check(&c, samples, strands, seed)?;
        let _ = writeln!(md, "sampled check: {} of {} points pass at n = {:?}", s.verified, s.samples, s.strands);
        ok &= s.pass();
        if let Value::Object(m) = &mut report {
            m.insert("sampling".into(), serde_json::to_value(&s)?);
        }
    }
    if let Value::Object(m) = &mut report {
        m.remove("schema");
    }
    Ok(Outcome { json: envelope("classify", report), markdown: md, ok })
}

fn parse_conjugator(s: &str, n: usize) -> Result<DiagonalConjugator> {
    let parse = |x: &str| RationalFunction::parse(x.trim()).map_err(|e| invalid(format!("{x}: {e}")));
    let t = if let Some(u) = s.strip_prefix("geometric:") {
        DiagonalConjugator::geometric(&parse(u)?, n)
    } else if let Some(list) = s.strip_prefix("diag:") {
        DiagonalConjugator::new(list.split(',').map(parse).collect::<Result<_>>()?)
    } else {
        bail!(invalid(format!("conjugator must be geometric:<u> or diag:<e1>,..., got {s:?}")));
    };
    t.map_err(|e| invalid(e.to_string()))
}

fn vector_string(v: &[RationalFunction]) -> String {
    format!("({})", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
}

fn cmd_analyze(
    args: &RepArgs,
    check: Check,
    samples: usize,
    max_len: usize,
    conjugator: Option<&str>,
    seed: u64,
) -> Result<Outcome> {
    let mut rep = load_rep(args)?;
    if let Some(c) = conjugator.filter(|_| check != Check::Conjugate) {
        rep = conjugate(&rep, &parse_conjugator(c, rep.dim())?)?;
    }
    let pres = presentation(rep.group(), rep.n(), rep.k())?;
    let conds: Vec<String> = rep.side_conditions().iter().map(|c| format!("{c} != 0")).collect();
    let name = rep.name().to_string();
    let head = format!("## {name} on {}\n\n", pres.label());
    match check {
        Check::Irreducible => {
            if samples == 0 {
                bail!(invalid("--samples must be positive"));
            }
            let v = sampled_irreducibility(&rep, &BTreeMap::new(), samples, seed)?;
            let ok = v.verdict == "Irreducible";
            let md = format!("{head}{v}\n");
            let body = json!({ "representation": name, "side_conditions": conds, "irreducibility": v });
            Ok(Outcome { json: envelope("analyze", body), markdown: md, ok })
        }
        Check::Reducible => {
            let vec = find_invariant_vector(&rep)?;
            let covec = find_invariant_covector(&rep)?;
            let mut md = head;
            match &vec {
                Some(v) => {
                    let _ = writeln!(md, "invariant vector {}", vector_string(v));
                }
                None => {
                    let _ = writeln!(md, "no invariant vector");
                }
            }
            match &covec {
                Some(v) => {
                    let _ = writeln!(md, "invariant covector {}", vector_string(v));
                }
                None => {
                    let _ = writeln!(md, "no invariant covector");
                }
            }
            let ok = vec.is_some() || covec.is_some();
            if !ok {
                let _ = writeln!(md, "reducibility: unknown");
            }
            let s = |v: &Option<Vec<RationalFunction>>| {
                v.as_ref().map(|v| v.iter().map(ToString::to_string).collect::<Vec<_>>())
            };
            let body = json!({
                "representation": name,
                "side_conditions": conds,
                "invariant_vector": s(&vec),
                "invariant_covector": s(&covec),
                "reducible": if ok { "yes" } else { "unknown" },
            });
            Ok(Outcome { json: envelope("analyze", body), markdown: md, ok })
        }
        Check::Witness => {
            let w = kernel_witness(&rep, &pres, &WitnessOptions { max_len, seed })?;
            let j = w.to_json();
            let mut md = head;
            match &j.certificate {
                Some(c) => {
                    let _ = writeln!(md, "kernel word `{}`: image identity, {} value {}", c.word, c.quotient, c.value);
                }
                None => {
                    let _ = writeln!(
                        md,
                        "no certified kernel word up to length {max_len} ({} words searched)",
                        j.words_searched
                    );
                }
            }
            for u in &j.uncertified {
                let _ = writeln!(md, "- `{u}` has identity image; no quotient certifies it is nontrivial");
            }
            let ok = j.found;
            let body = json!({ "representation": name, "side_conditions": conds, "witness": j });
            Ok(Outcome { json: envelope("analyze", body), markdown: md, ok })
        }
        Check::Forbidden => {
            let a = forbidden_audit(&rep, &pres)?;
            let mut md = head;
            for r in &a.relations {
                let _ =
                    writeln!(md, "- ({}) {}: {}", r.tag, r.relation, if r.holds { "holds" } else { "does not hold" });
            }
            let body = json!({ "representation": name, "audit": a });
            Ok(Outcome { json: envelope("analyze", body), markdown: md, ok: true })
        }
        Check::Conjugate => {
            let spec = conjugator.ok_or_else(|| invalid("--check conjugate needs --conjugator"))?;
            let t = parse_conjugator(spec, rep.dim())?;
            let conj = conjugate(&rep, &t)?;
            let before = verify_representation(&rep, &pres)?;
            let after = verify_representation(&conj, &pres)?;
            let same = before.pass == after.pass
                && before.relations.iter().zip(&after.relations).all(|(a, b)| a.holds == b.holds);
            let mut md = head;
            let _ = writeln!(md, "before: {}", if before.pass { "pass" } else { "FAIL" });
            let _ = writeln!(md, "after {}: {}", conj.name(), if after.pass { "pass" } else { "FAIL" });
            let _ = writeln!(md, "verdicts agree: {}", if same { "yes" } else { "no" });
            let body = json!({
                "representation": name,
                "conjugated": conj.to_json(),
                "before": before,
                "after": after,
                "verdicts_agree": same,
            });
            Ok(Outcome { json: envelope("analyze", body), markdown: md, ok: same })
        }
    }
}

fn cmd_lkb(
    variant: &str,
    n: usize,
    check: LkbCheck,
    params: &str,
    samples: usize,
    max_len: usize,
    seed: u64,
) -> Result<Outcome> {
    let v: LkbVariant = variant.parse().map_err(invalid)?;
    let n = if matches!(v, LkbVariant::M2wb3 | LkbVariant::M2wb3Exchanged) { 3 } else { n };
    let lkb = lkb_variant(v, n).map_err(|e| invalid(e.to_string()))?;
    let params = parse_params(params)?;
    let rep = specialize(lkb.as_rep(), &params)?;
    let pres = presentation(rep.group(), n, rep.k())?;
    let name = rep.name().to_string();
    match check {
        LkbCheck::Relations => {
            let report = verify_representation(&rep, &pres)?;
            let mut md = verification_markdown(&report);
            let mut body = json!({ "variant": v, "report": report });
            if !pres.forbidden.is_empty() {
                let a = forbidden_audit(&rep, &pres)?;
                let held = a.satisfied();
                let _ = writeln!(
                    md,
                    "forbidden relations that hold: {}",
                    if held.is_empty() { "none".to_string() } else { held.join(", ") }
                );
                body["forbidden"] = serde_json::to_value(&a)?;
            }
            Ok(Outcome { json: envelope("lkb", body), markdown: md, ok: report.pass })
        }
        LkbCheck::T1 => {
            let cmp = compare_t1(n)?;
            let md = if cmp.equal() {
                format!("## t = 1 against the welded matrices, n = {n}\n\nequal\n")
            } else {
                format!("## t = 1 against the welded matrices, n = {n}\n\ndiffer at sigma_{:?}\n", cmp.mismatched)
            };
            let ok = cmp.equal();
            Ok(Outcome { json: envelope("lkb", json!({ "comparison": cmp })), markdown: md, ok })
        }
        LkbCheck::Irreducible => {
            if samples == 0 {
                bail!(invalid("--samples must be positive"));
            }
            let verdict = sampled_irreducibility(&rep, &BTreeMap::new(), samples, seed)?;
            let ok = verdict.verdict == "Irreducible";
            let md = format!("## {name}\n\n{verdict}\n");
            Ok(Outcome { json: envelope("lkb", json!({ "variant": v, "irreducibility": verdict })), markdown: md, ok })
        }
        LkbCheck::Witness => {
            let w = kernel_witness(&rep, &pres, &WitnessOptions { max_len, seed })?;
            let j = w.to_json();
            let md = match &j.certificate {
                Some(c) => {
                    format!("## {name}\n\nkernel word `{}`: image identity, {} value {}\n", c.word, c.quotient, c.value)
                }
                None => format!(
                    "## {name}\n\nno certified kernel word up to length {max_len} ({} words searched)\n",
                    j.words_searched
                ),
            };
            let ok = j.found;
            Ok(Outcome { json: envelope("lkb", json!({ "variant": v, "witness": j })), markdown: md, ok })
        }
        LkbCheck::Export => {
            let j = rep.to_json();
            let md = format!("```json\n{}\n```\n", serde_json::to_string_pretty(&j)?);
            Ok(Outcome { json: envelope("lkb", json!({ "variant": v, "representation": j })), markdown: md, ok: true })
        }
    }
}
