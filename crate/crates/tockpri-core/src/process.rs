//! The process language: abstract syntax, guardedness validation, and the
//! built-in fixture corpus.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::event::{Alphabet, Event};
use crate::order::PriorityOrder;

/// A process term. `Prefix`/`ExtChoice` are the untimed readings (no time
/// passes); `TPrefix`/`TExtChoice` are the timed forms where waiting is
/// possible and tock synchronises across the choice.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ProcessExpr {
    Stop,
    Skip,
    Div,
    Chaos,
    Prefix(Event, Box<ProcessExpr>),
    TPrefix(Event, Box<ProcessExpr>),
    ExtChoice(Box<ProcessExpr>, Box<ProcessExpr>),
    TExtChoice(Box<ProcessExpr>, Box<ProcessExpr>),
    IntChoice(Box<ProcessExpr>, Box<ProcessExpr>),
    Seq(Box<ProcessExpr>, Box<ProcessExpr>),
    Wait(u32),
    Ref(String),
}

impl ProcessExpr {
    pub fn prefix(e: Event, p: ProcessExpr) -> Self {
        ProcessExpr::Prefix(e, Box::new(p))
    }

    pub fn tprefix(e: Event, p: ProcessExpr) -> Self {
        ProcessExpr::TPrefix(e, Box::new(p))
    }

    pub fn ext(p: ProcessExpr, q: ProcessExpr) -> Self {
        ProcessExpr::ExtChoice(Box::new(p), Box::new(q))
    }

    pub fn text(p: ProcessExpr, q: ProcessExpr) -> Self {
        ProcessExpr::TExtChoice(Box::new(p), Box::new(q))
    }

    pub fn int(p: ProcessExpr, q: ProcessExpr) -> Self {
        ProcessExpr::IntChoice(Box::new(p), Box::new(q))
    }

    pub fn seq(p: ProcessExpr, q: ProcessExpr) -> Self {
        ProcessExpr::Seq(Box::new(p), Box::new(q))
    }

    pub fn named(n: &str) -> Self {
        ProcessExpr::Ref(n.to_string())
    }

    /// Events syntactically mentioned by prefixes.
    pub fn events(&self, out: &mut BTreeSet<Event>) {
        match self {
            ProcessExpr::Prefix(e, p) | ProcessExpr::TPrefix(e, p) => {
                out.insert(e.clone());
                p.events(out);
            }
            ProcessExpr::ExtChoice(p, q)
            | ProcessExpr::TExtChoice(p, q)
            | ProcessExpr::IntChoice(p, q)
            | ProcessExpr::Seq(p, q) => {
                p.events(out);
                q.events(out);
            }
            _ => {}
        }
    }

    /// Names referenced anywhere in the term.
    pub fn references(&self, out: &mut BTreeSet<String>) {
        match self {
            ProcessExpr::Ref(n) => {
                out.insert(n.clone());
            }
            ProcessExpr::Prefix(_, p) | ProcessExpr::TPrefix(_, p) => p.references(out),
            ProcessExpr::ExtChoice(p, q)
            | ProcessExpr::TExtChoice(p, q)
            | ProcessExpr::IntChoice(p, q)
            | ProcessExpr::Seq(p, q) => {
                p.references(out);
                q.references(out);
            }
            _ => {}
        }
    }
}

pub type Definitions = BTreeMap<String, ProcessExpr>;

/// Errors raised when validating a set of definitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProcessError {
    UnboundProcessName(String),
    UnknownEvent(Event),
    /// A cycle in the reference graph that passes through no prefix or
    /// positive wait; bounded unfolding would not terminate.
    UnguardedRecursion(Vec<String>),
}

impl fmt::Display for ProcessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProcessError::UnboundProcessName(n) => write!(f, "unbound process name `{n}`"),
            ProcessError::UnknownEvent(e) => write!(f, "event `{e}` is not in the alphabet"),
            ProcessError::UnguardedRecursion(cycle) => {
                write!(f, "unguarded recursion through ")?;
                for (i, n) in cycle.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" -> ")?;
                    }
                    f.write_str(n)?;
                }
                Ok(())
            }
        }
    }
}

/// Can the term terminate without consuming an event cell? (Seq passes
/// control to its right operand exactly in this case.)
fn nullable(expr: &ProcessExpr, defs: &Definitions, memo: &mut BTreeMap<String, bool>) -> bool {
    match expr {
        ProcessExpr::Skip | ProcessExpr::Chaos => true,
        ProcessExpr::Wait(n) => *n == 0,
        ProcessExpr::Stop | ProcessExpr::Div => false,
        ProcessExpr::Prefix(..) | ProcessExpr::TPrefix(..) => false,
        ProcessExpr::ExtChoice(p, q)
        | ProcessExpr::TExtChoice(p, q)
        | ProcessExpr::IntChoice(p, q) => {
            nullable(p, defs, memo) || nullable(q, defs, memo)
        }
        ProcessExpr::Seq(p, q) => nullable(p, defs, memo) && nullable(q, defs, memo),
        ProcessExpr::Ref(n) => {
            if let Some(&v) = memo.get(n) {
                return v;
            }
            // assume non-nullable while computing; a nullable-only-via-itself
            // cycle is unguarded anyway and reported separately
            memo.insert(n.clone(), false);
            let v = defs
                .get(n)
                .map(|e| nullable(e, defs, memo))
                .unwrap_or(false);
            memo.insert(n.clone(), v);
            v
        }
    }
}

/// Names reachable from `expr` without passing a guard.
fn unguarded_refs(
    expr: &ProcessExpr,
    defs: &Definitions,
    nmemo: &mut BTreeMap<String, bool>,
    out: &mut BTreeSet<String>,
) {
    match expr {
        ProcessExpr::Ref(n) => {
            out.insert(n.clone());
        }
        ProcessExpr::ExtChoice(p, q)
        | ProcessExpr::TExtChoice(p, q)
        | ProcessExpr::IntChoice(p, q) => {
            unguarded_refs(p, defs, nmemo, out);
            unguarded_refs(q, defs, nmemo, out);
        }
        ProcessExpr::Seq(p, q) => {
            unguarded_refs(p, defs, nmemo, out);
            if nullable(p, defs, nmemo) {
                unguarded_refs(q, defs, nmemo, out);
            }
        }
        _ => {}
    }
}

/// Checks that every cycle in the reference graph passes through a prefix or
/// a positive wait, and that every reference resolves.
pub fn validate_guarded(defs: &Definitions) -> Result<(), ProcessError> {
    for expr in defs.values() {
        let mut refs = BTreeSet::new();
        expr.references(&mut refs);
        for n in refs {
            if !defs.contains_key(&n) {
                return Err(ProcessError::UnboundProcessName(n));
            }
        }
    }
    let mut nmemo = BTreeMap::new();
    let graph: BTreeMap<String, BTreeSet<String>> = defs
        .iter()
        .map(|(name, expr)| {
            let mut out = BTreeSet::new();
            unguarded_refs(expr, defs, &mut nmemo, &mut out);
            (name.clone(), out)
        })
        .collect();
    // DFS cycle detection on the unguarded-reference graph
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Doing,
        Done,
    }
    fn dfs(
        n: &str,
        graph: &BTreeMap<String, BTreeSet<String>>,
        marks: &mut BTreeMap<String, Mark>,
        path: &mut Vec<String>,
    ) -> Result<(), ProcessError> {
        match marks.get(n) {
            Some(Mark::Done) => return Ok(()),
            Some(Mark::Doing) => {
                let start = path.iter().position(|m| m == n).unwrap_or(0);
                let mut cycle: Vec<String> = path[start..].to_vec();
                cycle.push(n.to_string());
                return Err(ProcessError::UnguardedRecursion(cycle));
            }
            None => {}
        }
        marks.insert(n.to_string(), Mark::Doing);
        path.push(n.to_string());
        if let Some(succs) = graph.get(n) {
            for s in succs {
                dfs(s, graph, marks, path)?;
            }
        }
        path.pop();
        marks.insert(n.to_string(), Mark::Done);
        Ok(())
    }
    let mut marks = BTreeMap::new();
    for n in graph.keys() {
        dfs(n, &graph, &mut marks, &mut Vec::new())?;
    }
    Ok(())
}

/// A complete specification: alphabet, priority order, named definitions and
/// the distinguished main process.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecFile {
    pub alphabet: Alphabet,
    pub order: PriorityOrder,
    pub defs: Definitions,
    pub main: String,
}

impl SpecFile {
    /// Full validation: events in range, references bound, recursion guarded.
    pub fn validate(&self) -> Result<(), ProcessError> {
        for expr in self.defs.values() {
            let mut evs = BTreeSet::new();
            expr.events(&mut evs);
            for e in evs {
                if !self.alphabet.contains_sym(&e) {
                    return Err(ProcessError::UnknownEvent(e));
                }
            }
        }
        if !self.defs.contains_key(&self.main) {
            return Err(ProcessError::UnboundProcessName(self.main.clone()));
        }
        validate_guarded(&self.defs)
    }

    pub fn main_expr(&self) -> &ProcessExpr {
        &self.defs[&self.main]
    }
}

/// The built-in fixture processes used throughout the law suites.
///
/// R is the untimed choice `a -> SKIP [] b -> SKIP`; S, T and priT are its
/// timed relatives; K terminates internally or offers `f`.
pub fn builtin_corpus() -> BTreeMap<String, SpecFile> {
    use ProcessExpr as P;
    let a = Event::sym("a");
    let b = Event::sym("b");
    let f = Event::sym("f");
    let ab = Alphabet::from_names(["a", "b"]);
    let a_lt_b = PriorityOrder::new([(a.clone(), b.clone())]).expect("acyclic");

    let mut out = BTreeMap::new();

    let r = P::ext(P::prefix(a.clone(), P::Skip), P::prefix(b.clone(), P::Skip));
    out.insert(
        "R".to_string(),
        SpecFile {
            alphabet: ab.clone(),
            order: a_lt_b.clone(),
            defs: BTreeMap::from([("R".to_string(), r)]),
            main: "R".to_string(),
        },
    );

    let s = P::int(
        P::tprefix(a.clone(), P::Skip),
        P::int(
            P::tprefix(b.clone(), P::Skip),
            P::seq(P::Wait(1), P::named("S")),
        ),
    );
    out.insert(
        "S".to_string(),
        SpecFile {
            alphabet: ab.clone(),
            order: a_lt_b.clone(),
            defs: BTreeMap::from([("S".to_string(), s)]),
            main: "S".to_string(),
        },
    );

    let t = P::int(
        P::text(
            P::tprefix(a.clone(), P::Skip),
            P::tprefix(b.clone(), P::Skip),
        ),
        P::seq(P::Wait(1), P::named("T")),
    );
    out.insert(
        "T".to_string(),
        SpecFile {
            alphabet: ab.clone(),
            order: a_lt_b.clone(),
            defs: BTreeMap::from([("T".to_string(), t)]),
            main: "T".to_string(),
        },
    );

    let pri_t = P::int(
        P::tprefix(b.clone(), P::Skip),
        P::seq(P::Wait(1), P::named("priT")),
    );
    out.insert(
        "priT".to_string(),
        SpecFile {
            alphabet: ab.clone(),
            order: a_lt_b.clone(),
            defs: BTreeMap::from([("priT".to_string(), pri_t)]),
            main: "priT".to_string(),
        },
    );

    let k = P::int(P::Skip, P::prefix(f.clone(), P::Skip));
    out.insert(
        "K".to_string(),
        SpecFile {
            alphabet: Alphabet::from_names(["f"]),
            order: PriorityOrder::new([(f.clone(), Event::Tick)]).expect("acyclic"),
            defs: BTreeMap::from([("K".to_string(), k)]),
            main: "K".to_string(),
        },
    );

    out
}
