//! Tick-tock traces: sequences of event and refusal observations.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::event::{subsets, Alphabet, Event};

/// A single observation: an event performed, or a set of events refused.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TtObs {
    Evt(Event),
    Ref(BTreeSet<Event>),
}

impl TtObs {
    pub fn evt(e: Event) -> Self {
        TtObs::Evt(e)
    }

    pub fn refusal<I: IntoIterator<Item = Event>>(events: I) -> Self {
        TtObs::Ref(events.into_iter().collect())
    }
}

impl fmt::Display for TtObs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TtObs::Evt(e) => write!(f, "evt {e}"),
            TtObs::Ref(s) => {
                f.write_str("ref{")?;
                for (i, e) in s.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str("}")
            }
        }
    }
}

/// One tick-tock observation sequence. Raw sequences can be built freely;
/// well-formedness is the separate [`TtTrace::is_valid`] predicate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TtTrace {
    obs: Vec<TtObs>,
}

impl TtTrace {
    pub fn empty() -> Self {
        TtTrace::default()
    }

    pub fn new(obs: Vec<TtObs>) -> Self {
        TtTrace { obs }
    }

    pub fn obs(&self) -> &[TtObs] {
        &self.obs
    }

    pub fn len(&self) -> usize {
        self.obs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.obs.is_empty()
    }

    pub fn cons(head: TtObs, rest: &TtTrace) -> Self {
        let mut obs = Vec::with_capacity(rest.obs.len() + 1);
        obs.push(head);
        obs.extend(rest.obs.iter().cloned());
        TtTrace { obs }
    }

    pub fn appended(&self, tail: TtObs) -> Self {
        let mut obs = self.obs.clone();
        obs.push(tail);
        TtTrace { obs }
    }

    pub fn concat(&self, rhs: &TtTrace) -> Self {
        let mut obs = self.obs.clone();
        obs.extend(rhs.obs.iter().cloned());
        TtTrace { obs }
    }

    /// Validity: tick only as the last event, every non-final refusal is
    /// immediately followed by tock, and every tock is immediately preceded
    /// by a refusal.
    pub fn is_valid(&self) -> bool {
        let n = self.obs.len();
        for (i, o) in self.obs.iter().enumerate() {
            match o {
                TtObs::Evt(Event::Tick) => {
                    if i + 1 != n {
                        return false;
                    }
                }
                TtObs::Evt(Event::Tock) => {
                    if i == 0 || !matches!(self.obs[i - 1], TtObs::Ref(_)) {
                        return false;
                    }
                }
                TtObs::Evt(_) => {}
                TtObs::Ref(_) => {
                    if i + 1 < n && !matches!(self.obs[i + 1], TtObs::Evt(Event::Tock)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Every refusal observation contains tick.
    pub fn refusals_contain_tick(&self) -> bool {
        self.obs.iter().all(|o| match o {
            TtObs::Ref(s) => s.contains(&Event::Tick),
            _ => true,
        })
    }

    /// The prefix relation on valid traces: stop anywhere, follow events
    /// exactly, shrink refusals to subsets.
    pub fn prefix_leq(&self, other: &TtTrace) -> bool {
        tt_leq(&self.obs, &other.obs)
    }

    /// Every trace below `self` in the prefix relation.
    pub fn prefix_downset(&self) -> BTreeSet<TtTrace> {
        downset(&self.obs).into_iter().map(TtTrace::new).collect()
    }

    /// The restriction of the prefix relation that only truncates and copies
    /// events; refusals must match exactly.
    pub fn weak_prefix_leq(&self, other: &TtTrace) -> bool {
        tt_leq_weak(&self.obs, &other.obs)
    }

    /// Every trace below `self` under the truncation-only relation.
    pub fn weak_prefix_downset(&self) -> BTreeSet<TtTrace> {
        downset_weak(&self.obs).into_iter().map(TtTrace::new).collect()
    }
}

fn tt_leq(lhs: &[TtObs], rhs: &[TtObs]) -> bool {
    match (lhs, rhs) {
        ([], _) => true,
        ([TtObs::Evt(e), lrest @ ..], [TtObs::Evt(f), rrest @ ..]) => {
            e == f && tt_leq(lrest, rrest)
        }
        ([TtObs::Ref(x)], [TtObs::Ref(y), ..]) => x.is_subset(y),
        ([TtObs::Ref(x), TtObs::Evt(Event::Tock), lrest @ ..], [TtObs::Ref(y), TtObs::Evt(Event::Tock), rrest @ ..]) => {
            x.is_subset(y) && tt_leq(lrest, rrest)
        }
        _ => false,
    }
}

fn tt_leq_weak(lhs: &[TtObs], rhs: &[TtObs]) -> bool {
    match (lhs, rhs) {
        ([], _) => true,
        ([TtObs::Evt(e), lrest @ ..], [TtObs::Evt(f), rrest @ ..]) => {
            e == f && tt_leq_weak(lrest, rrest)
        }
        ([TtObs::Ref(x)], [TtObs::Ref(y), ..]) => x == y,
        ([TtObs::Ref(x), TtObs::Evt(Event::Tock), lrest @ ..], [TtObs::Ref(y), TtObs::Evt(Event::Tock), rrest @ ..]) => {
            x == y && tt_leq_weak(lrest, rrest)
        }
        _ => false,
    }
}

fn downset(obs: &[TtObs]) -> Vec<Vec<TtObs>> {
    let mut out = alloc::vec![Vec::new()];
    match obs {
        [] => {}
        [TtObs::Evt(e), rest @ ..] => {
            for tail in downset(rest) {
                let mut t = alloc::vec![TtObs::Evt(e.clone())];
                t.extend(tail);
                out.push(t);
            }
        }
        [TtObs::Ref(y), TtObs::Evt(Event::Tock), rest @ ..] => {
            for x in subsets_of(y) {
                out.push(alloc::vec![TtObs::Ref(x.clone())]);
                for tail in downset(rest) {
                    let mut t = alloc::vec![TtObs::Ref(x.clone()), TtObs::Evt(Event::Tock)];
                    t.extend(tail);
                    out.push(t);
                }
            }
        }
        [TtObs::Ref(y), ..] => {
            for x in subsets_of(y) {
                out.push(alloc::vec![TtObs::Ref(x)]);
            }
        }
    }
    out
}

fn downset_weak(obs: &[TtObs]) -> Vec<Vec<TtObs>> {
    let mut out = alloc::vec![Vec::new()];
    match obs {
        [] => {}
        [TtObs::Evt(e), rest @ ..] => {
            for tail in downset_weak(rest) {
                let mut t = alloc::vec![TtObs::Evt(e.clone())];
                t.extend(tail);
                out.push(t);
            }
        }
        [TtObs::Ref(y), TtObs::Evt(Event::Tock), rest @ ..] => {
            out.push(alloc::vec![TtObs::Ref(y.clone())]);
            for tail in downset_weak(rest) {
                let mut t = alloc::vec![TtObs::Ref(y.clone()), TtObs::Evt(Event::Tock)];
                t.extend(tail);
                out.push(t);
            }
        }
        [TtObs::Ref(y), ..] => {
            out.push(alloc::vec![TtObs::Ref(y.clone())]);
        }
    }
    out
}

fn subsets_of(base: &BTreeSet<Event>) -> Vec<BTreeSet<Event>> {
    subsets(base).collect()
}

impl fmt::Display for TtTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("⟨")?;
        for (i, o) in self.obs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{o}")?;
        }
        f.write_str("⟩")
    }
}

/// All valid traces over the alphabet's universe with at most `bound`
/// observations. When `tick_refusals` holds, only refusals containing tick
/// are generated (candidates for the maximal model).
pub fn all_valid_tt_traces(alpha: &Alphabet, bound: usize, tick_refusals: bool) -> Vec<TtTrace> {
    let refs: Vec<BTreeSet<Event>> = subsets(&alpha.universe())
        .filter(|s| !tick_refusals || s.contains(&Event::Tick))
        .collect();
    let mut evts: Vec<Event> = alpha.sigma().iter().cloned().collect();
    evts.push(Event::Tick);
    let mut out = Vec::new();
    let mut stack = alloc::vec![Vec::<TtObs>::new()];
    while let Some(cur) = stack.pop() {
        out.push(TtTrace::new(cur.clone()));
        if cur.len() >= bound {
            continue;
        }
        for e in &evts {
            if *e == Event::Tick {
                // tick ends the trace
                let mut t = cur.clone();
                t.push(TtObs::Evt(Event::Tick));
                out.push(TtTrace::new(t));
            } else {
                let mut t = cur.clone();
                t.push(TtObs::Evt(e.clone()));
                stack.push(t);
            }
        }
        for r in &refs {
            let mut t = cur.clone();
            t.push(TtObs::Ref(r.clone()));
            out.push(TtTrace::new(t.clone()));
            if t.len() < bound {
                t.push(TtObs::Evt(Event::Tock));
                stack.push(t);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str) -> Event {
        Event::from_name(s)
    }

    fn refusal(names: &[&str]) -> TtObs {
        TtObs::refusal(names.iter().map(|s| ev(s)))
    }

    #[test]
    fn validity_examples() {
        let good = TtTrace::new(alloc::vec![refusal(&["a", "b", "tick"]), TtObs::evt(Event::Tock)]);
        assert!(good.is_valid());
        let bad_ref = TtTrace::new(alloc::vec![refusal(&["tick"]), TtObs::evt(ev("a"))]);
        assert!(!bad_ref.is_valid());
        let bare_tock = TtTrace::new(alloc::vec![TtObs::evt(Event::Tock)]);
        assert!(!bare_tock.is_valid());
        let tick_mid = TtTrace::new(alloc::vec![TtObs::evt(Event::Tick), TtObs::evt(ev("a"))]);
        assert!(!tick_mid.is_valid());
    }

    #[test]
    fn prefix_examples() {
        assert!(TtTrace::empty().prefix_leq(&TtTrace::new(alloc::vec![TtObs::evt(ev("a"))])));
        let lo = TtTrace::new(alloc::vec![refusal(&["b"])]);
        let hi = TtTrace::new(alloc::vec![refusal(&["a", "b", "tick"]), TtObs::evt(Event::Tock)]);
        assert!(lo.prefix_leq(&hi));
        let too_big = TtTrace::new(alloc::vec![refusal(&["a", "b", "tick", "tock"])]);
        assert!(!too_big.prefix_leq(&TtTrace::new(alloc::vec![refusal(&["a", "b", "tick"])])));
    }

    #[test]
    fn downset_matches_relation() {
        let alpha = Alphabet::from_names(["a"]);
        let all = all_valid_tt_traces(&alpha, 3, false);
        for sigma in all.iter().take(60) {
            let down = sigma.prefix_downset();
            for rho in &all {
                assert_eq!(down.contains(rho), rho.prefix_leq(sigma), "{rho} vs {sigma}");
            }
        }
    }

    #[test]
    fn enumeration_is_valid() {
        let alpha = Alphabet::from_names(["a"]);
        let all = all_valid_tt_traces(&alpha, 2, true);
        assert!(all.iter().all(|t| t.is_valid() && t.refusals_contain_tick()));
        // ⟨⟩, evt a, evt tick, 4 refs, a·a, a·tick, a·ref(4), ref·tock(4)
        assert_eq!(all.len(), 17);
    }
}
