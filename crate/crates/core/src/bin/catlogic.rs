//! `catlogic`: command-line front end. Every command prints a [`RunReport`]; the exit code
//! is 0 when all checks pass, 1 when one fails and 2 on bad input or usage.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use catlogic::completion::ex_lex_completion;
use catlogic::fincat::{is_equivalence, FinCategory, RawCategory};
use catlogic::limits::{classify, ClassifyFailure};
use catlogic::modpp::{
    closure_audit, defclass_membership, implication_counterexample, pp_implies, pp_solution_set, small_modules, FiniteModule,
    FiniteRing, LinearPp, PpPair,
};
use catlogic::oracle::{run_check, sweep_counterexample, CHECK_IDS, DEFAULT_BUDGET};
use catlogic::ppcat::run_script;
use catlogic::reglogic::{find_counterexample, parse_theory, pp_normalize, relational_signature, Printer, RawStructure};
use catlogic::report::{CheckReport, Failure, RunReport};
use catlogic::sites::{enumerate_points, is_sheaf, RawFunctor, RawSite};

#[derive(Parser)]
#[command(name = "catlogic", version, about = "Finite categorical logic: exactness, completions, sites, regular theories and pp pairs")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Include wall time in the report (reports are otherwise byte-identical across runs).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a category is lex, regular and exact.
    Classify { category: PathBuf },
    /// Ex/lex completion of a lex category, with its unit.
    Complete { category: PathBuf },
    /// Sheaf checks and points of sites with singleton covers.
    #[command(subcommand)]
    Site(SiteCommand),
    /// Models and pp normal forms for `.rth` theories.
    #[command(subcommand)]
    Logic(LogicCommand),
    /// Pp formulas over a finite ring.
    #[command(subcommand)]
    Pp(PpCommand),
    /// Batch scripts in the category of pp pairs.
    #[command(subcommand)]
    Ppcat(PpcatCommand),
    /// Cross-check the library against brute-force oracles.
    Oracle {
        /// Cap on instances per check; 0 gives an empty report.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Run only these checks (repeatable).
        #[arg(long = "check")]
        checks: Vec<String>,
    },
}

#[derive(Subcommand)]
enum SiteCommand {
    /// Is the functor a sheaf? A site file is a category plus `covers`; the functor is
    /// covariant on that category, i.e. a presheaf on its opposite. Without a functor file
    /// the `functor` key of the site file is used.
    Sheafcheck { site: PathBuf, functor: Option<PathBuf> },
    /// Points of the site and their order.
    Points { site: PathBuf },
}

#[derive(Subcommand)]
enum LogicCommand {
    /// Does the structure satisfy every sequent of the theory?
    Models { theory: PathBuf, structure: PathBuf },
    /// Pp normal form of both sides of every sequent.
    Normalize { theory: PathBuf },
}

#[derive(Subcommand)]
enum PpCommand {
    /// Solution set of a formula in a module.
    Solve {
        #[arg(long)]
        ring: String,
        /// Module such as `R/(2) + R`.
        #[arg(long)]
        module: String,
        formula: String,
    },
    /// Does `phi` imply `psi` in every module?
    Implies {
        #[arg(long)]
        ring: String,
        phi: String,
        psi: String,
    },
    /// Is the module in the class defined by a theory file (a JSON list of `[phi, psi]`)?
    Member {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        module: String,
        theory: PathBuf,
    },
    /// Closure audit of a theory's class over all modules up to a size.
    Audit {
        #[arg(long)]
        ring: String,
        #[arg(long, default_value_t = 16)]
        max_size: usize,
        theory: PathBuf,
    },
}

#[derive(Subcommand)]
enum PpcatCommand {
    /// Run a `.ppc` batch script.
    Run { script: PathBuf },
}

type Outcome = Result<(Vec<CheckReport>, Value), String>;

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, String> {
    serde_json::from_str(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_category(path: &Path) -> Result<FinCategory, String> {
    let raw: RawCategory = read_json(path)?;
    raw.build().map_err(|e| format!("{}: {e}", path.display()))
}

fn ring(name: &str) -> Result<FiniteRing, String> {
    FiniteRing::by_name(name).map_err(|e| e.to_string())
}

fn module(ring: &FiniteRing, spec: &str) -> Result<FiniteModule, String> {
    FiniteModule::parse_spec(ring, spec).map_err(|e| format!("module `{spec}`: {e}"))
}

fn formula(ring: &FiniteRing, text: &str, names: Option<&[String]>) -> Result<(LinearPp, Vec<String>), String> {
    LinearPp::parse(ring, text, names).map_err(|e| format!("formula `{text}`: {e}"))
}

fn pp_theory(ring: &FiniteRing, path: &Path) -> Result<Vec<PpPair>, String> {
    let pairs: Vec<(String, String)> = read_json(path)?;
    pairs
        .iter()
        .map(|(a, b)| {
            let (phi, names) = formula(ring, a, None)?;
            let (psi, _) = formula(ring, b, Some(&names))?;
            PpPair::either(ring, phi, psi).map_err(|e| format!("pair ({a}, {b}): {e}"))
        })
        .collect()
}

fn single(id: &str, title: &str, ok: bool, failure: impl FnOnce() -> Failure) -> CheckReport {
    let mut r = CheckReport::new(id, title);
    r.record(ok, failure);
    r
}

fn quoted(words: &[String]) -> String {
    words
        .iter()
        .map(|w| if w.chars().all(|c| c.is_ascii_alphanumeric() || "-_./=".contains(c)) { w.clone() } else { format!("'{w}'") })
        .collect::<Vec<_>>()
        .join(" ")
}

fn failure_json(c: &FinCategory, f: &ClassifyFailure) -> Value {
    let o = |x: usize| c.object_name(x).to_string();
    let m = |f: usize| c.morphism_name(f).to_string();
    match *f {
        ClassifyFailure::NoTerminal => json!({ "kind": "no_terminal" }),
        ClassifyFailure::NoProduct { a, b } => json!({ "kind": "no_product", "a": o(a), "b": o(b) }),
        ClassifyFailure::NoEqualizer { f, g } => json!({ "kind": "no_equalizer", "f": m(f), "g": m(g) }),
        ClassifyFailure::NoKernelPairCoequalizer { f } => json!({ "kind": "no_kernel_pair_coequalizer", "f": m(f) }),
        ClassifyFailure::UnstableRegularEpi { epi, along, pulled_back } => {
            json!({ "kind": "unstable_regular_epi", "epi": m(epi), "along": m(along), "pulled_back": m(pulled_back) })
        }
        ClassifyFailure::NotEffective { object, inclusion } => {
            json!({ "kind": "not_effective", "object": o(object), "inclusion": m(inclusion) })
        }
    }
}

fn cmd_classify(path: &Path) -> Outcome {
    let c = load_category(path)?;
    let k = classify(&c);
    let result = json!({
        "is_lex": k.is_lex,
        "is_regular": k.is_regular,
        "is_exact": k.is_exact,
        "terminal": k.terminal.map(|t| c.object_name(t)),
        "regular_epis": k.regular_epis.iter().map(|&e| c.morphism_name(e)).collect::<Vec<_>>(),
        "equivalence_relations": k.equivalence_relations.len(),
        "failure": k.failure.as_ref().map(|f| failure_json(&c, f)),
    });
    Ok((Vec::new(), result))
}

fn cmd_complete(path: &Path) -> Outcome {
    let c = load_category(path)?;
    let comp = ex_lex_completion(&c).map_err(|e| format!("{}: {e}", path.display()))?;
    let e = &comp.category;
    let unit = &comp.unit;
    let exact = classify(e).is_exact;
    let result = json!({
        "category": RawCategory::from(e),
        "unit": {
            "objects": c.objects().map(|x| (c.object_name(x).to_string(), json!(e.object_name(unit.on_object(x))))).collect::<serde_json::Map<_, _>>(),
            "morphisms": c.morphisms().map(|f| (c.morphism_name(f).to_string(), json!(e.morphism_name(unit.on_morphism(f))))).collect::<serde_json::Map<_, _>>(),
        },
        "unit_is_equivalence": is_equivalence(unit),
        "objects": comp.objects.iter().enumerate().map(|(i, o)| json!({
            "name": e.object_name(i),
            "generator": c.object_name(o.generator),
            "sizes": c.objects().map(|x| (c.object_name(x).to_string(), json!(o.presheaf.size(x)))).collect::<serde_json::Map<_, _>>(),
        })).collect::<Vec<_>>(),
    });
    let check = single("exact", "the completion is exact", exact, || Failure {
        detail: "completion failed the exactness test".into(),
        artifact: serde_json::to_value(RawCategory::from(e)).expect("json"),
        replay: "catlogic classify artifact.json".into(),
    });
    Ok((vec![check], result))
}

fn cmd_sheafcheck(site: &Path, functor: Option<&Path>, argv: &[String]) -> Outcome {
    let value: Value = read_json(site)?;
    let raw: RawSite = serde_json::from_value(value.clone()).map_err(|e| format!("{}: {e}", site.display()))?;
    let s = raw.build().map_err(|e| format!("{}: {e}", site.display()))?;
    let raw_f: RawFunctor = match functor {
        Some(p) => read_json(p)?,
        None => {
            let v = value.get("functor").ok_or_else(|| format!("{}: no functor given and no `functor` key", site.display()))?;
            serde_json::from_value(v.clone()).map_err(|e| format!("{}: functor: {e}", site.display()))?
        }
    };
    let f = raw_f.build(s.base()).map_err(|e| format!("functor: {e}"))?;
    let sheaf = is_sheaf(&s, &f).map_err(|e| e.to_string())?;
    let b = s.base();
    let bad: Vec<&str> = s.generators().iter().filter(|&&h| !f.is_bijective_on(h)).map(|&h| b.morphism_name(h)).collect();
    let result = json!({
        "is_sheaf": sheaf,
        "generators": s.generators().iter().map(|&h| b.morphism_name(h)).collect::<Vec<_>>(),
        "not_bijective_on": bad,
    });
    let check = single("sheaf", "F(h) is a bijection for every generator h", sheaf, || Failure {
        detail: format!("F is not bijective on {}", bad.join(", ")),
        artifact: json!({ "not_bijective_on": bad }),
        replay: quoted(argv),
    });
    Ok((vec![check], result))
}

fn cmd_points(site: &Path) -> Outcome {
    let raw: RawSite = read_json(site)?;
    let s = raw.build().map_err(|e| format!("{}: {e}", site.display()))?;
    let p = enumerate_points(&s).map_err(|e| format!("{}: {e}", site.display()))?;
    let sc = s.site_category();
    let pc = &p.category;
    let mut order = Vec::new();
    for i in pc.objects() {
        for j in pc.objects() {
            if i != j && !pc.hom(i, j).is_empty() {
                order.push(json!([pc.object_name(i), pc.object_name(j)]));
            }
        }
    }
    let result = json!({
        "points": p.supports.iter().enumerate().map(|(i, sup)| json!({
            "name": pc.object_name(i),
            "support": sup.iter().map(|&x| sc.object_name(x)).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "order": order,
    });
    Ok((Vec::new(), result))
}

fn load_theory(path: &Path) -> Result<catlogic::reglogic::Theory, String> {
    parse_theory(&read(path)?).map_err(|e| format!("{}:{e}", path.display()))
}

fn cmd_models(theory: &Path, structure: &Path, argv: &[String]) -> Outcome {
    let t = load_theory(theory)?;
    let raw: RawStructure = read_json(structure)?;
    let m = raw.build(&t.signature).map_err(|e| format!("{}: {e}", structure.display()))?;
    let cx = find_counterexample(&t, &m).map_err(|e| e.to_string())?;
    let p = Printer { signature: &t.signature };
    let result = json!({
        "models": cx.is_none(),
        "sequents": t.sequents.len(),
        "counterexample": cx.as_ref().map(|c| json!({
            "sequent": p.sequent(&t.sequents[c.sequent]),
            "assignment": c.assignment,
        })),
    });
    let check = single("models", "the structure satisfies every sequent", cx.is_none(), || {
        let c = cx.clone().expect("counterexample");
        Failure {
            detail: format!("sequent `{}` fails at {:?}", p.sequent(&t.sequents[c.sequent]), c.assignment),
            artifact: serde_json::to_value(&raw).expect("json"),
            replay: quoted(argv),
        }
    });
    Ok((vec![check], result))
}

fn cmd_normalize(theory: &Path) -> Outcome {
    let t = load_theory(theory)?;
    let p = Printer { signature: &t.signature };
    let rsig = relational_signature(&t.signature);
    let rp = Printer { signature: &rsig };
    let sequents: Vec<Value> = t
        .sequents
        .iter()
        .map(|s| {
            json!({
                "input": p.sequent(s),
                "lhs": rp.formula(&pp_normalize(&t.signature, &s.lhs).to_formula()),
                "rhs": rp.formula(&pp_normalize(&t.signature, &s.rhs).to_formula()),
            })
        })
        .collect();
    Ok((Vec::new(), json!({ "sequents": sequents })))
}

fn cmd_solve(ring_name: &str, spec: &str, text: &str) -> Outcome {
    let r = ring(ring_name)?;
    let m = module(&r, spec)?;
    let (phi, names) = formula(&r, text, None)?;
    let set = pp_solution_set(&m, &phi).map_err(|e| e.to_string())?;
    let result = json!({
        "formula": phi.display(&r, &names).to_string(),
        "variables": names,
        "module_size": m.size(),
        "count": set.len(),
        "solutions": set.tuples().collect::<Vec<_>>(),
    });
    Ok((Vec::new(), result))
}

fn cmd_implies(ring_name: &str, a: &str, b: &str, argv: &[String]) -> Outcome {
    let r = ring(ring_name)?;
    let (phi, names) = formula(&r, a, None)?;
    let (psi, _) = formula(&r, b, Some(&names))?;
    let holds = pp_implies(&r, &phi, &psi).map_err(|e| e.to_string())?;
    // prefer a witness from the small corpus; fall back to the free realization of phi
    let witness = if holds {
        None
    } else {
        let corpus = small_modules(&r, 16);
        match sweep_counterexample(&corpus, &phi, &psi) {
            Some((i, t)) => Some((corpus[i].clone(), t)),
            None => implication_counterexample(&r, &phi, &psi).map_err(|e| e.to_string())?,
        }
    };
    let witness_json = witness.as_ref().map(|(m, t)| {
        json!({
            "module_size": m.size(),
            "module": m.tables(),
            "tuple": names.iter().cloned().zip(t.iter().copied()).collect::<Vec<_>>(),
        })
    });
    let result = json!({
        "phi": phi.display(&r, &names).to_string(),
        "psi": psi.display(&r, &names).to_string(),
        "implies": holds,
        "witness": witness_json,
    });
    let check = single("implies", "phi implies psi in every module", holds, || Failure {
        detail: format!("a tuple of a {}-element module satisfies phi but not psi", witness.as_ref().map_or(0, |w| w.0.size())),
        artifact: witness_json.clone().unwrap_or(Value::Null),
        replay: quoted(argv),
    });
    Ok((vec![check], result))
}

fn cmd_member(ring_name: &str, spec: &str, theory: &Path, argv: &[String]) -> Outcome {
    let r = ring(ring_name)?;
    let m = module(&r, spec)?;
    let t = pp_theory(&r, theory)?;
    let member = defclass_membership(&t, &m).map_err(|e| e.to_string())?;
    let pairs = t
        .iter()
        .map(|p| {
            let phi = pp_solution_set(&m, p.phi()).map_err(|e| e.to_string())?.len();
            let psi = pp_solution_set(&m, p.psi()).map_err(|e| e.to_string())?.len();
            Ok(json!({ "phi_count": phi, "psi_count": psi }))
        })
        .collect::<Result<Vec<_>, String>>()?;
    let result = json!({ "module_size": m.size(), "member": member, "pairs": pairs });
    let check = single("member", "phi(M) = psi(M) for every pair", member, || Failure {
        detail: "some pair has phi(M) != psi(M)".into(),
        artifact: Value::Null,
        replay: quoted(argv),
    });
    Ok((vec![check], result))
}

fn cmd_audit(ring_name: &str, max_size: usize, theory: &Path, argv: &[String]) -> Outcome {
    let r = ring(ring_name)?;
    let t = pp_theory(&r, theory)?;
    let corpus = small_modules(&r, max_size);
    let rep = closure_audit(&t, &corpus).map_err(|e| e.to_string())?;
    let result = serde_json::to_value(&rep).expect("json");
    let check = single("closure", "the class is closed within the corpus", rep.passed(), || Failure {
        detail: format!("{} closure violations", rep.violations.len()),
        artifact: serde_json::to_value(&rep.violations).expect("json"),
        replay: quoted(argv),
    });
    Ok((vec![check], json!({ "corpus_size": corpus.len(), "audit": result })))
}

fn cmd_ppcat(path: &Path, argv: &[String]) -> Outcome {
    let events = run_script(&read(path)?).map_err(|e| format!("{}:{e}", path.display()))?;
    let mut check = CheckReport::new("script", "every statement succeeds");
    for e in &events {
        check.record(e.ok, || Failure {
            detail: format!("line {}: `{}` came out negative", e.line, e.statement),
            artifact: e.result.clone(),
            replay: quoted(argv),
        });
    }
    Ok((vec![check], serde_json::to_value(&events).expect("json")))
}

fn cmd_oracle(seed: u64, budget: usize, only: &[String]) -> Outcome {
    for id in only {
        if !CHECK_IDS.contains(&id.as_str()) {
            return Err(format!("unknown check `{id}`; known: {}", CHECK_IDS.join(", ")));
        }
    }
    let ids: Vec<&str> = CHECK_IDS.iter().copied().filter(|id| only.is_empty() || only.iter().any(|o| o == id)).collect();
    let checks: Vec<CheckReport> = ids.par_iter().map(|id| run_check(id, seed, budget).expect("known id")).collect();
    Ok((checks, json!({ "seed": seed, "budget": budget })))
}

fn dispatch(cli: &Cli, argv: &[String]) -> Outcome {
    match &cli.command {
        Command::Classify { category } => cmd_classify(category),
        Command::Complete { category } => cmd_complete(category),
        Command::Site(SiteCommand::Sheafcheck { site, functor }) => cmd_sheafcheck(site, functor.as_deref(), argv),
        Command::Site(SiteCommand::Points { site }) => cmd_points(site),
        Command::Logic(LogicCommand::Models { theory, structure }) => cmd_models(theory, structure, argv),
        Command::Logic(LogicCommand::Normalize { theory }) => cmd_normalize(theory),
        Command::Pp(PpCommand::Solve { ring, module, formula }) => cmd_solve(ring, module, formula),
        Command::Pp(PpCommand::Implies { ring, phi, psi }) => cmd_implies(ring, phi, psi, argv),
        Command::Pp(PpCommand::Member { ring, module, theory }) => cmd_member(ring, module, theory, argv),
        Command::Pp(PpCommand::Audit { ring, max_size, theory }) => cmd_audit(ring, *max_size, theory, argv),
        Command::Ppcat(PpcatCommand::Run { script }) => cmd_ppcat(script, argv),
        Command::Oracle { budget, checks } => cmd_oracle(cli.seed, *budget, checks),
    }
}

fn main() -> ExitCode {
    let mut argv: Vec<String> = std::env::args().collect();
    if let Some(first) = argv.first_mut() {
        *first = "catlogic".into();
    }
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let (checks, result) = match dispatch(&cli, &argv) {
        Ok(out) => out,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let mut report = RunReport::new(argv, checks, result);
    if cli.timing {
        report.wall_time_ms = Some(start.elapsed().as_millis());
    }
    let text = match cli.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(if report.passed { 0 } else { 1 })
}
