//! Bounded-depth finite-linear denotations, the FL healthiness conditions,
//! and the least-healthy-closure of a single trace.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::event::{Alphabet, Event};
use crate::fl_trace::{all_fl_tick_traces, AccEventCell, Acceptance, FlTrace};
use crate::process::{Definitions, ProcessExpr};

/// A bounded FL denotation: every trace has at most `bound` event cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlDenotation {
    pub traces: BTreeSet<FlTrace>,
    pub bound: usize,
    pub alphabet: Alphabet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlError {
    /// Operands of a denotation-level operation disagree on bound or universe.
    BoundMismatch,
    /// The trace handed to the healthy closure is not tick-healthy.
    NotFlTick,
}

impl fmt::Display for FlError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlError::BoundMismatch => f.write_str("denotations disagree on bound or universe"),
            FlError::NotFlTick => f.write_str("trace is not tick-healthy"),
        }
    }
}

/// Evaluation-time value: the bounded trace set together with every
/// tick-completable cell prefix π (meaning π ⌢ ⟨(•,tick),•⟩ belongs to the
/// unbounded denotation and |π| is within the bound). Carrying the prefixes
/// explicitly lets sequential composition see completions whose tick cell
/// would overflow the bound, without ever raising the bound of a recursive
/// call.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct Den {
    traces: BTreeSet<FlTrace>,
    ticks: BTreeSet<Vec<AccEventCell>>,
}

/// Merged initial acceptance of a choice: `•` absorbs, sets unite. In the
/// timed form tock is offered only when both sides offer it, since tock
/// synchronises across the choice.
fn acc_merge(a: &Acceptance, b: &Acceptance, timed: bool) -> Acceptance {
    match (a, b) {
        (Acceptance::Set(x), Acceptance::Set(y)) => {
            let mut u: BTreeSet<Event> = x.union(y).cloned().collect();
            if timed && !(x.contains(&Event::Tock) && y.contains(&Event::Tock)) {
                u.remove(&Event::Tock);
            }
            Acceptance::Set(u)
        }
        _ => Acceptance::Null,
    }
}

fn finals(p: &Den) -> BTreeSet<Acceptance> {
    p.traces
        .iter()
        .filter(|t| t.is_empty())
        .map(|t| t.final_acc().clone())
        .collect()
}

fn cons_cell(acc: Acceptance, e: Event, rest: &FlTrace) -> FlTrace {
    FlTrace::cons(
        AccEventCell::new(acc, e).expect("acceptance offers the event"),
        rest,
    )
}

fn cons_cells(acc: Acceptance, e: Event, rest: &[AccEventCell]) -> Vec<AccEventCell> {
    let mut out = Vec::with_capacity(rest.len() + 1);
    out.push(AccEventCell::new(acc, e).expect("acceptance offers the event"));
    out.extend(rest.iter().cloned());
    out
}

struct Evaluator<'a> {
    defs: &'a Definitions,
    alpha: &'a Alphabet,
    memo: BTreeMap<(String, usize), Option<Den>>,
}

impl<'a> Evaluator<'a> {
    fn new(defs: &'a Definitions, alpha: &'a Alphabet) -> Self {
        Evaluator { defs, alpha, memo: BTreeMap::new() }
    }

    fn skip(&self, k: usize) -> Den {
        let mut traces = BTreeSet::from([FlTrace::null()]);
        if k >= 1 {
            traces.insert(cons_cell(Acceptance::Null, Event::Tick, &FlTrace::null()));
        }
        Den { traces, ticks: BTreeSet::from([Vec::new()]) }
    }

    fn eval(&mut self, expr: &ProcessExpr, k: usize) -> Den {
        match expr {
            ProcessExpr::Div => Den {
                traces: BTreeSet::from([FlTrace::null()]),
                ticks: BTreeSet::new(),
            },
            ProcessExpr::Stop => Den {
                traces: BTreeSet::from([
                    FlTrace::null(),
                    FlTrace::just(Acceptance::set([])),
                ]),
                ticks: BTreeSet::new(),
            },
            ProcessExpr::Skip => self.skip(k),
            ProcessExpr::Chaos => {
                let traces = all_fl_tick_traces(self.alpha, k);
                let ticks = traces
                    .iter()
                    .filter(|t| {
                        *t.final_acc() == Acceptance::Null && !t.contains_tick_event()
                    })
                    .map(|t| t.cells().to_vec())
                    .collect();
                Den { traces, ticks }
            }
            ProcessExpr::Prefix(a, p) => {
                let accs = [Acceptance::Null, Acceptance::set([a.clone()])];
                let mut out = Den::default();
                out.traces.insert(FlTrace::null());
                out.traces.insert(FlTrace::just(accs[1].clone()));
                if k >= 1 {
                    let cont = self.eval(p, k - 1);
                    for acc in &accs {
                        for rho in &cont.traces {
                            out.traces.insert(cons_cell(acc.clone(), a.clone(), rho));
                        }
                        for pi in &cont.ticks {
                            out.ticks.insert(cons_cells(acc.clone(), a.clone(), pi));
                        }
                    }
                }
                out
            }
            ProcessExpr::TPrefix(a, p) => {
                let offered = Acceptance::set([a.clone(), Event::Tock]);
                let accs = [Acceptance::Null, offered.clone()];
                let mut out = Den::default();
                out.traces.insert(FlTrace::null());
                out.traces.insert(FlTrace::just(offered));
                if k >= 1 {
                    let cont = self.eval(p, k - 1);
                    let waited = self.eval(expr, k - 1);
                    for acc in &accs {
                        for rho in &cont.traces {
                            out.traces.insert(cons_cell(acc.clone(), a.clone(), rho));
                        }
                        for pi in &cont.ticks {
                            out.ticks.insert(cons_cells(acc.clone(), a.clone(), pi));
                        }
                        for rho in &waited.traces {
                            out.traces.insert(cons_cell(acc.clone(), Event::Tock, rho));
                        }
                        for pi in &waited.ticks {
                            out.ticks.insert(cons_cells(acc.clone(), Event::Tock, pi));
                        }
                    }
                }
                out
            }
            ProcessExpr::IntChoice(p, q) => {
                let mut out = self.eval(p, k);
                let dq = self.eval(q, k);
                out.traces.extend(dq.traces);
                out.ticks.extend(dq.ticks);
                out
            }
            ProcessExpr::ExtChoice(p, q) => {
                let dp = self.eval(p, k);
                let dq = self.eval(q, k);
                ext_merge(&dp, &dq, false, k)
            }
            ProcessExpr::TExtChoice(p, q) => {
                let dp = self.eval(p, k);
                let dq = self.eval(q, k);
                ext_merge(&dp, &dq, true, k)
            }
            ProcessExpr::Seq(p, q) => {
                let dp = self.eval(p, k);
                let mut out = Den::default();
                for rho in &dp.traces {
                    if !rho.contains_tick_event() {
                        out.traces.insert(rho.clone());
                    }
                }
                for pi in dp.ticks.clone() {
                    let dq = self.eval(q, k - pi.len());
                    let head = FlTrace::new(pi.clone(), Acceptance::Null);
                    for sigma in &dq.traces {
                        out.traces
                            .insert(head.concat_final(sigma).expect("head ends in •"));
                    }
                    for pi2 in &dq.ticks {
                        let mut joined = pi.clone();
                        joined.extend(pi2.iter().cloned());
                        out.ticks.insert(joined);
                    }
                }
                out
            }
            ProcessExpr::Wait(0) => self.skip(k),
            ProcessExpr::Wait(n) => {
                let offered = Acceptance::set([Event::Tock]);
                let accs = [Acceptance::Null, offered.clone()];
                let mut out = Den::default();
                out.traces.insert(FlTrace::null());
                out.traces.insert(FlTrace::just(offered));
                if k >= 1 {
                    let cont = self.eval(&ProcessExpr::Wait(n - 1), k - 1);
                    for acc in &accs {
                        for rho in &cont.traces {
                            out.traces.insert(cons_cell(acc.clone(), Event::Tock, rho));
                        }
                        for pi in &cont.ticks {
                            out.ticks.insert(cons_cells(acc.clone(), Event::Tock, pi));
                        }
                    }
                }
                out
            }
            ProcessExpr::Ref(name) => {
                let key = (name.clone(), k);
                match self.memo.get(&key) {
                    Some(Some(d)) => return d.clone(),
                    Some(None) => panic!("unguarded recursion through `{name}`"),
                    None => {}
                }
                self.memo.insert(key.clone(), None);
                let body = self.defs.get(name).expect("validated reference").clone();
                let d = self.eval(&body, k);
                self.memo.insert(key, Some(d.clone()));
                d
            }
        }
    }
}

/// External choice on evaluation values. With `timed` set, tock does not
/// resolve the choice: both sides must offer it and the choice persists over
/// the union of their tock-derivatives.
fn ext_merge(dp: &Den, dq: &Den, timed: bool, k: usize) -> Den {
    let mut out = Den::default();
    let fp = finals(dp);
    let fq = finals(dq);
    for a in &fp {
        for b in &fq {
            out.traces.insert(FlTrace::just(acc_merge(a, b, timed)));
        }
    }
    let resolves = |e: &Event| !timed || *e != Event::Tock;
    for (mine, theirs) in [(dp, &fq), (dq, &fp)] {
        for sigma in &mine.traces {
            if let Some(first) = sigma.cells().first() {
                if resolves(first.event()) {
                    let rest = FlTrace::new(sigma.cells()[1..].to_vec(), sigma.final_acc().clone());
                    for b in theirs.iter() {
                        out.traces.insert(cons_cell(
                            acc_merge(first.acc(), b, timed),
                            first.event().clone(),
                            &rest,
                        ));
                    }
                }
            }
        }
        for pi in &mine.ticks {
            match pi.split_first() {
                None => {
                    out.ticks.insert(Vec::new());
                }
                Some((first, rest)) if resolves(first.event()) => {
                    for b in theirs.iter() {
                        out.ticks.insert(cons_cells(
                            acc_merge(first.acc(), b, timed),
                            first.event().clone(),
                            rest,
                        ));
                    }
                }
                _ => {}
            }
        }
    }
    if timed && k >= 1 {
        let tock_part = |d: &Den| {
            let mut accs = BTreeSet::new();
            let mut cont = Den::default();
            for sigma in &d.traces {
                if let Some(first) = sigma.cells().first() {
                    if *first.event() == Event::Tock {
                        accs.insert(first.acc().clone());
                        cont.traces.insert(FlTrace::new(
                            sigma.cells()[1..].to_vec(),
                            sigma.final_acc().clone(),
                        ));
                    }
                }
            }
            for pi in &d.ticks {
                if let Some((first, rest)) = pi.split_first() {
                    if *first.event() == Event::Tock {
                        accs.insert(first.acc().clone());
                        cont.ticks.insert(rest.to_vec());
                    }
                }
            }
            (accs, cont)
        };
        let (pa, pd) = tock_part(dp);
        let (qa, qd) = tock_part(dq);
        if !pd.traces.is_empty() && !qd.traces.is_empty() {
            let merged = ext_merge(&pd, &qd, true, k - 1);
            for a in &pa {
                for b in &qa {
                    let acc = acc_merge(a, b, timed);
                    for gamma in &merged.traces {
                        out.traces.insert(cons_cell(acc.clone(), Event::Tock, gamma));
                    }
                    for pi in &merged.ticks {
                        out.ticks.insert(cons_cells(acc.clone(), Event::Tock, pi));
                    }
                }
            }
        }
    }
    out
}

/// The bounded denotation of a process expression: exactly the traces of the
/// unbounded denotation with at most `k` event cells. Precondition: the
/// definitions validate (guarded, bound, events in range).
pub fn denote_fl(
    expr: &ProcessExpr,
    defs: &Definitions,
    alpha: &Alphabet,
    k: usize,
) -> FlDenotation {
    let den = Evaluator::new(defs, alpha).eval(expr, k);
    FlDenotation { traces: den.traces, bound: k, alphabet: alpha.clone() }
}

/// FL0: nonemptiness.
pub fn check_fl0(p: &FlDenotation) -> bool {
    !p.traces.is_empty()
}

/// Every trace below `sigma` in the prefix order.
pub fn fl_downset(sigma: &FlTrace) -> BTreeSet<FlTrace> {
    let mut out = BTreeSet::new();
    for cut in 0..=sigma.len() {
        let stop = if cut == sigma.len() {
            sigma.final_acc().clone()
        } else {
            sigma.cells()[cut].acc().clone()
        };
        let finals: Vec<Acceptance> = if stop == Acceptance::Null {
            alloc::vec![Acceptance::Null]
        } else {
            alloc::vec![Acceptance::Null, stop]
        };
        // each kept cell's acceptance may weaken to •
        let mut prefixes: Vec<Vec<AccEventCell>> = alloc::vec![Vec::new()];
        for cell in &sigma.cells()[..cut] {
            let mut next = Vec::new();
            for p in &prefixes {
                for acc in [Acceptance::Null, cell.acc().clone()] {
                    let mut q = p.clone();
                    q.push(
                        AccEventCell::new(acc, cell.event().clone())
                            .expect("original acceptance offers its own event"),
                    );
                    next.push(q);
                }
            }
            prefixes = next;
        }
        for p in prefixes {
            for f in &finals {
                out.insert(FlTrace::new(p.clone(), f.clone()));
            }
        }
    }
    out
}

/// FL1: closed under the prefix order.
pub fn check_fl1(p: &FlDenotation) -> bool {
    p.traces
        .iter()
        .all(|sigma| fl_downset(sigma).is_subset(&p.traces))
}

/// FL2: every stable stop can be completed by any offered event. Traces
/// already at the bound are exempt, since their completion would overflow it.
pub fn check_fl2(p: &FlDenotation) -> bool {
    for t in &p.traces {
        if t.len() >= p.bound {
            continue;
        }
        if let Acceptance::Set(s) = t.final_acc() {
            for e in s {
                let mut cells = t.cells().to_vec();
                cells.push(
                    AccEventCell::new(t.final_acc().clone(), e.clone())
                        .expect("member of the acceptance"),
                );
                if !p.traces.contains(&FlTrace::new(cells, Acceptance::Null)) {
                    return false;
                }
            }
        }
    }
    true
}

/// FL3: every trace is tick-healthy.
pub fn check_fl3(p: &FlDenotation) -> bool {
    p.traces.iter().all(|t| t.is_fl_tick())
}

/// The least FL-healthy set containing `rho`: closed under the prefix order
/// and under single-cell completion of stable stops, with no bound exemption.
pub fn fl_healthy_closure(rho: &FlTrace) -> Result<BTreeSet<FlTrace>, FlError> {
    if !rho.is_fl_tick() {
        return Err(FlError::NotFlTick);
    }
    let mut out = BTreeSet::new();
    let mut work = alloc::vec![rho.clone()];
    while let Some(t) = work.pop() {
        if !out.insert(t.clone()) {
            continue;
        }
        for d in fl_downset(&t) {
            if !out.contains(&d) {
                work.push(d);
            }
        }
        if let Acceptance::Set(s) = t.final_acc() {
            for e in s {
                let mut cells = t.cells().to_vec();
                cells.push(
                    AccEventCell::new(t.final_acc().clone(), e.clone())
                        .expect("member of the acceptance"),
                );
                let c = FlTrace::new(cells, Acceptance::Null);
                if !out.contains(&c) {
                    work.push(c);
                }
            }
        }
    }
    Ok(out)
}

/// Refinement is subset inclusion of trace sets.
pub fn refines_fl(spec: &FlDenotation, imp: &FlDenotation) -> Result<bool, FlError> {
    if spec.bound != imp.bound || spec.alphabet != imp.alphabet {
        return Err(FlError::BoundMismatch);
    }
    Ok(imp.traces.is_subset(&spec.traces))
}

/// Event-prefix at the denotation level: `a` then `p`. The result's bound is
/// one more than `p`'s.
pub fn prefix_compose(a: &Event, p: &FlDenotation) -> FlDenotation {
    let accs = [Acceptance::Null, Acceptance::set([a.clone()])];
    let mut traces = BTreeSet::from([FlTrace::null(), FlTrace::just(accs[1].clone())]);
    for acc in &accs {
        for rho in &p.traces {
            traces.insert(cons_cell(acc.clone(), a.clone(), rho));
        }
    }
    FlDenotation { traces, bound: p.bound + 1, alphabet: p.alphabet.clone() }
}

/// Sequential composition at the denotation level. `p` must be given with one
/// cell of headroom (bound k+1) so completions at full length are visible;
/// the result has bound `k`.
pub fn seq_compose(
    p: &FlDenotation,
    q: &FlDenotation,
    k: usize,
) -> Result<FlDenotation, FlError> {
    if p.bound != k + 1 || q.bound != k || p.alphabet != q.alphabet {
        return Err(FlError::BoundMismatch);
    }
    let mut traces = BTreeSet::new();
    for rho in &p.traces {
        if !rho.contains_tick_event() && rho.len() <= k {
            traces.insert(rho.clone());
        }
    }
    for rho in &p.traces {
        let n = rho.len();
        if n >= 1
            && *rho.cells()[n - 1].event() == Event::Tick
            && *rho.cells()[n - 1].acc() == Acceptance::Null
            && *rho.final_acc() == Acceptance::Null
        {
            let head = FlTrace::new(rho.cells()[..n - 1].to_vec(), Acceptance::Null);
            for sigma in &q.traces {
                if head.len() + sigma.len() <= k {
                    traces.insert(head.concat_final(sigma).expect("head ends in •"));
                }
            }
        }
    }
    Ok(FlDenotation { traces, bound: k, alphabet: p.alphabet.clone() })
}
