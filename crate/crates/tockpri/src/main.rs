//! Command-line front end: parse spec files, compute denotations, apply
//! priorities, map between models, run health checks and law suites.
//!
//! Exit codes: 0 success, 1 semantic failure (refinement or law violation,
//! failed health check), 2 usage or parse error.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tockpri::json::{fl_report, table_report, tt_report, tt_trace_json};
use tockpri::laws::{run_suite, SUITES};
use tockpri::parser::{parse_expr, parse_spec};
use tockpri_core::event::{Alphabet, Event};
use tockpri_core::fl::{
    check_fl0, check_fl1, check_fl2, check_fl3, denote_fl, FlDenotation,
};
use tockpri_core::galois::{fl2tt, fl2ttm, tt2fl, ttm2fl};
use tockpri_core::order::PriorityOrder;
use tockpri_core::process::{builtin_corpus, SpecFile};
use tockpri_core::tt::{
    check_tt0, check_tt1w, check_tt2_sketched, check_tt4_sketched, check_ttm1,
    check_ttm2, check_ttm3, mk_tt1, un_tt1, TtDenotation,
};
use tockpri_core::tt_pri::pri_tt;

#[derive(Parser)]
#[command(name = "tockpri", version, about = "Workbench for priorities in tock-CSP")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Fl,
    Ttm,
    Tt,
}

impl Model {
    fn name(self) -> &'static str {
        match self {
            Model::Fl => "fl",
            Model::Ttm => "ttm",
            Model::Tt => "tt",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args)]
struct Common {
    /// Semantic model to work in
    #[arg(long, value_enum, default_value = "fl")]
    model: Model,
    /// Denotation depth (number of FL event cells)
    #[arg(long, default_value_t = 2)]
    depth: usize,
    /// File with `a < b` pairs overriding the spec's priority order
    #[arg(long)]
    order_file: Option<String>,
    /// Output format
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Seed for randomised suites
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Print the denotation of a process
    Denote {
        #[command(flatten)]
        common: Common,
        /// Spec file path, builtin corpus name, or inline expression
        input: String,
    },
    /// Print the prioritised denotation of a process
    Prioritise {
        #[command(flatten)]
        common: Common,
        input: String,
    },
    /// Check trace refinement: every implementation trace is a spec trace
    Refine {
        #[command(flatten)]
        common: Common,
        /// The specification process
        spec: String,
        /// The implementation process
        imp: String,
    },
    /// Run the model's healthiness checkers on a denotation
    Health {
        #[command(flatten)]
        common: Common,
        input: String,
    },
    /// Map a denotation between models
    Map {
        #[command(flatten)]
        common: Common,
        input: String,
        #[arg(long, value_enum)]
        from: Model,
        #[arg(long, value_enum)]
        to: Model,
    },
    /// Run an algebraic-law suite
    Laws {
        #[command(flatten)]
        common: Common,
        /// One of: lemma1, lemma2, lemma3, closure, galois, theorem1, examples
        #[arg(long)]
        suite: String,
    },
}

/// A usage or input error: reported on stderr, exit code 2.
struct UsageError(String);

impl<T: std::fmt::Display> From<T> for UsageError {
    fn from(e: T) -> Self {
        UsageError(e.to_string())
    }
}

fn depth_max() -> Result<usize, UsageError> {
    match std::env::var("TOCKPRI_DEPTH_MAX") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| UsageError(format!("TOCKPRI_DEPTH_MAX is not a natural: `{s}`"))),
        Err(_) => Ok(6),
    }
}

fn check_depth(depth: usize) -> Result<(), UsageError> {
    let max = depth_max()?;
    if depth > max {
        return Err(UsageError(format!(
            "depth {depth} exceeds the cap {max} (set TOCKPRI_DEPTH_MAX to raise it)"
        )));
    }
    Ok(())
}

/// Resolve an input argument: an existing file is parsed as a spec file, a
/// corpus name yields the builtin fixture, and anything else is parsed as an
/// inline expression over the events it mentions (plus a and b).
fn load_input(input: &str) -> Result<SpecFile, UsageError> {
    if Path::new(input).exists() {
        let text = std::fs::read_to_string(input)
            .map_err(|e| UsageError(format!("{input}: {e}")))?;
        return parse_spec(&text).map_err(|e| UsageError(format!("{input}: {e}")));
    }
    if let Some(spec) = builtin_corpus().get(input) {
        return Ok(spec.clone());
    }
    let expr = parse_expr(input, 1)?;
    let mut events = BTreeSet::new();
    expr.events(&mut events);
    events.extend([Event::sym("a"), Event::sym("b")]);
    let spec = SpecFile {
        alphabet: Alphabet::new(events),
        order: PriorityOrder::empty(),
        defs: std::collections::BTreeMap::from([("MAIN".to_string(), expr)]),
        main: "MAIN".to_string(),
    };
    spec.validate()?;
    Ok(spec)
}

/// Parse an order file: `a < b` pairs separated by commas or newlines, with
/// `#` comments and an optional leading `order` keyword per line.
fn load_order(path: &str, alpha: &Alphabet) -> Result<PriorityOrder, UsageError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| UsageError(format!("{path}: {e}")))?;
    let mut pairs = Vec::new();
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        let line = line.strip_prefix("order").map(str::trim).unwrap_or(line);
        for item in line.split(',') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let (lo, hi) = item
                .split_once('<')
                .ok_or_else(|| UsageError(format!("{path}: expected `a < b`, got `{item}`")))?;
            let mut pair = Vec::new();
            for name in [lo.trim(), hi.trim()] {
                let e = Event::from_name(name);
                if matches!(e, Event::Sym(_)) && !alpha.contains_sym(&e) {
                    return Err(UsageError(format!(
                        "{path}: event `{name}` is not in the alphabet"
                    )));
                }
                pair.push(e);
            }
            pairs.push((pair[0].clone(), pair[1].clone()));
        }
    }
    PriorityOrder::new(pairs).map_err(|_| UsageError(format!("{path}: order contains a cycle")))
}

fn effective_order(common: &Common, spec: &SpecFile) -> Result<PriorityOrder, UsageError> {
    match &common.order_file {
        Some(path) => load_order(path, &spec.alphabet),
        None => Ok(spec.order.clone()),
    }
}

fn den(spec: &SpecFile, k: usize) -> FlDenotation {
    denote_fl(spec.main_expr(), &spec.defs, &spec.alphabet, k)
}

/// Print a line to stdout, exiting quietly if the pipe has been closed.
fn out(s: impl std::fmt::Display) {
    use std::io::Write;
    if writeln!(std::io::stdout().lock(), "{s}").is_err() {
        std::process::exit(0);
    }
}

/// Print already-terminated text, exiting quietly on a closed pipe.
fn out_raw(s: &str) {
    use std::io::Write;
    if write!(std::io::stdout().lock(), "{s}").is_err() {
        std::process::exit(0);
    }
}

fn emit(common: &Common, v: &Value) {
    match common.format {
        Format::Json => out(v),
        Format::Table => out_raw(&table_report(v)),
    }
}

fn model_report(common: &Common, d: &FlDenotation) -> Result<Value, UsageError> {
    Ok(match common.model {
        Model::Fl => fl_report(d, common.depth),
        Model::Ttm => tt_report(&fl2ttm(d)?, "ttm", common.depth),
        Model::Tt => tt_report(&fl2tt(d)?, "tt", common.depth),
    })
}

fn cmd_denote(common: &Common, input: &str) -> Result<ExitCode, UsageError> {
    check_depth(common.depth)?;
    let spec = load_input(input)?;
    let d = den(&spec, common.depth);
    let report = model_report(common, &d)?;
    emit(common, &report);
    Ok(ExitCode::SUCCESS)
}

fn cmd_prioritise(common: &Common, input: &str) -> Result<ExitCode, UsageError> {
    check_depth(common.depth)?;
    let spec = load_input(input)?;
    let order = effective_order(common, &spec)?;
    let d = den(&spec, common.depth);
    let report = match common.model {
        Model::Fl => fl_report(&tockpri_core::fl_pri::pri_fl(&order, &d), common.depth),
        Model::Tt => tt_report(&pri_tt(&order, &fl2tt(&d)?), "tt", common.depth),
        Model::Ttm => {
            return Err(UsageError(
                "prioritisation is defined in the fl and tt models only".into(),
            ))
        }
    };
    emit(common, &report);
    Ok(ExitCode::SUCCESS)
}

fn cmd_refine(common: &Common, spec_in: &str, imp_in: &str) -> Result<ExitCode, UsageError> {
    check_depth(common.depth)?;
    let spec = load_input(spec_in)?;
    let imp = load_input(imp_in)?;
    if spec.alphabet != imp.alphabet {
        return Err(UsageError(format!(
            "`{spec_in}` and `{imp_in}` have different alphabets"
        )));
    }
    let ds = den(&spec, common.depth);
    let di = den(&imp, common.depth);
    // compare as sets in the requested model; a counterexample is the least
    // implementation trace missing from the spec, by length then canonical
    // JSON text
    let (holds, witness): (bool, Option<Value>) = match common.model {
        Model::Fl => {
            let extra = least_extra(&di.traces, &ds.traces, |t| {
                (t.len(), tockpri::json::fl_trace_json(t))
            });
            (extra.is_none(), extra)
        }
        Model::Ttm => {
            let (s, i) = (fl2ttm(&ds)?, fl2ttm(&di)?);
            let extra = least_extra(&i.traces, &s.traces, |t| (t.len(), tt_trace_json(t)));
            (extra.is_none(), extra)
        }
        Model::Tt => {
            let (s, i) = (fl2tt(&ds)?, fl2tt(&di)?);
            let extra = least_extra(&i.traces, &s.traces, |t| (t.len(), tt_trace_json(t)));
            (extra.is_none(), extra)
        }
    };
    let verdict = json!({
        "model": common.model.name(),
        "depth": common.depth,
        "verdict": if holds { "PASS" } else { "FAIL" },
        "counterexample": witness,
    });
    match common.format {
        Format::Json => out(&verdict),
        Format::Table => {
            out(format!(
                "refine ({}, depth {}): {}",
                common.model.name(),
                common.depth,
                if holds { "PASS" } else { "FAIL" }
            ));
            if !holds {
                out(format!("counterexample: {}", verdict["counterexample"]));
            }
        }
    }
    Ok(if holds { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

/// The least member of `imp \ spec` by length then canonical JSON text.
fn least_extra<T: Ord>(
    imp: &BTreeSet<T>,
    spec: &BTreeSet<T>,
    key: impl Fn(&T) -> (usize, Value),
) -> Option<Value> {
    imp.difference(spec)
        .map(|t| {
            let (len, v) = key(t);
            (len, v.to_string(), v)
        })
        .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)))
        .map(|(_, _, v)| v)
}

fn cmd_health(common: &Common, input: &str) -> Result<ExitCode, UsageError> {
    check_depth(common.depth)?;
    let spec = load_input(input)?;
    let d = den(&spec, common.depth);
    let checks: Vec<(&str, bool)> = match common.model {
        Model::Fl => vec![
            ("FL0", check_fl0(&d)),
            ("FL1", check_fl1(&d)),
            ("FL2", check_fl2(&d)),
            ("FL3", check_fl3(&d)),
        ],
        Model::Ttm => {
            let p = fl2ttm(&d)?;
            vec![
                ("TT0", check_tt0(&p)),
                ("TT1w", check_tt1w(&p)),
                ("TT2-sketched", check_tt2_sketched(&p)),
                ("TT4-sketched", check_tt4_sketched(&p)),
                ("TTM1", check_ttm1(&p)),
                ("TTM2", check_ttm2(&p)),
                ("TTM3", check_ttm3(&p)),
            ]
        }
        Model::Tt => {
            let p = fl2tt(&d)?;
            vec![
                ("TT0", check_tt0(&p)),
                ("TT1", mk_tt1(&p) == p),
                ("TT1w", check_tt1w(&p)),
                ("TT2-sketched", check_tt2_sketched(&p)),
                ("TT4-sketched", check_tt4_sketched(&p)),
            ]
        }
    };
    let all = checks.iter().all(|(_, ok)| *ok);
    let report = json!({
        "model": common.model.name(),
        "depth": common.depth,
        "healthy": all,
        "checks": checks
            .iter()
            .map(|(n, ok)| json!({"name": n, "pass": ok}))
            .collect::<Vec<_>>(),
    });
    match common.format {
        Format::Json => out(&report),
        Format::Table => {
            out(format!(
                "health ({}, depth {}): {}",
                common.model.name(),
                common.depth,
                if all { "PASS" } else { "FAIL" }
            ));
            for (n, ok) in &checks {
                out(format!("  {} {}", if *ok { "PASS" } else { "FAIL" }, n));
            }
        }
    }
    Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_map(
    common: &Common,
    input: &str,
    from: Model,
    to: Model,
) -> Result<ExitCode, UsageError> {
    check_depth(common.depth)?;
    let spec = load_input(input)?;
    let k = common.depth;
    // mapping back towards FL goes through the adjoints, which need
    // headroom: evaluate one cell deeper and query at the requested depth
    let needs_headroom = to == Model::Fl && from != Model::Fl;
    let base = den(&spec, if needs_headroom { k + 1 } else { k });
    enum Den {
        Fl(FlDenotation),
        Tt(TtDenotation),
    }
    let src = match from {
        Model::Fl => Den::Fl(base),
        Model::Ttm => Den::Tt(fl2ttm(&base)?),
        Model::Tt => Den::Tt(fl2tt(&base)?),
    };
    let report = match (src, to) {
        (Den::Fl(d), Model::Fl) => fl_report(&d, k),
        (Den::Fl(d), Model::Ttm) => tt_report(&fl2ttm(&d)?, "ttm", k),
        (Den::Fl(d), Model::Tt) => tt_report(&fl2tt(&d)?, "tt", k),
        (Den::Tt(p), Model::Fl) => {
            let d = match from {
                Model::Ttm => ttm2fl(&p, k),
                _ => tt2fl(&p, k),
            };
            fl_report(&d, k)
        }
        (Den::Tt(p), Model::Ttm) => {
            let q = match from {
                Model::Ttm => p,
                _ => un_tt1(&p, p.bound.saturating_sub(1)),
            };
            tt_report(&q, "ttm", k)
        }
        (Den::Tt(p), Model::Tt) => {
            let q = match from {
                Model::Ttm => mk_tt1(&p),
                _ => p,
            };
            tt_report(&q, "tt", k)
        }
    };
    emit(common, &report);
    Ok(ExitCode::SUCCESS)
}

fn cmd_laws(common: &Common, suite: &str) -> Result<ExitCode, UsageError> {
    check_depth(common.depth)?;
    let report = run_suite(suite, common.depth, common.seed).ok_or_else(|| {
        UsageError(format!("unknown suite `{suite}` (expected one of: {})", SUITES.join(", ")))
    })?;
    match common.format {
        Format::Json => out(report.to_json()),
        Format::Table => out_raw(&report.to_text()),
    }
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = match &cli.command {
        Command::Denote { common, input } => cmd_denote(common, input),
        Command::Prioritise { common, input } => cmd_prioritise(common, input),
        Command::Refine { common, spec, imp } => cmd_refine(common, spec, imp),
        Command::Health { common, input } => cmd_health(common, input),
        Command::Map { common, input, from, to } => cmd_map(common, input, *from, *to),
        Command::Laws { common, suite } => cmd_laws(common, suite),
    };
    match run {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
