//! Tick-tock trace sets: the subset-closure map `mk_tt1` and its upper
//! adjoint `un_tt1`, the healthiness checkers, and the least-healthy-closure
//! of a single trace.

use alloc::collections::BTreeSet;
use core::fmt;

use crate::event::{subsets, Alphabet, Event};
use crate::tt_trace::{TtObs, TtTrace};

/// Whether a trace set records only maximal refusals (the image of the FL
/// model) or is closed under refusal shrinking and prefixes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavour {
    Maximal,
    Full,
}

/// A bounded tick-tock denotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TtDenotation {
    pub traces: BTreeSet<TtTrace>,
    pub bound: usize,
    pub alphabet: Alphabet,
    pub flavour: Flavour,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TtError {
    /// A trace fails validity or, where required, tick-refusal saturation.
    InvalidTrace,
}

impl fmt::Display for TtError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TtError::InvalidTrace => f.write_str("trace is not a valid tick-tock observation"),
        }
    }
}

/// Closes a set downward under the tick-tock prefix order (prefixes and
/// refusal shrinking). Fixpoints of this map are exactly the TT1-healthy
/// sets.
pub fn mk_tt1(p: &TtDenotation) -> TtDenotation {
    let mut traces = BTreeSet::new();
    for sigma in &p.traces {
        traces.extend(sigma.prefix_downset());
    }
    TtDenotation {
        traces,
        bound: p.bound,
        alphabet: p.alphabet.clone(),
        flavour: Flavour::Full,
    }
}

/// The number of event cells a tick-tock trace accounts for: one per `evt`
/// observation. A denotation holding the image of depth-`k` FL traces has
/// observation bound `2k + 1`, so `k` is recovered as `bound / 2`.
fn cell_count(t: &TtTrace) -> usize {
    t.obs().iter().filter(|o| matches!(o, TtObs::Evt(_))).count()
}

/// TTM1: an event outside a refused set (other than tock) can happen instead
/// of the refusal being observed. Completions that would need an event cell
/// beyond the bound are exempt.
pub fn check_ttm1(p: &TtDenotation) -> bool {
    let universe = p.alphabet.universe();
    for t in &p.traces {
        if cell_count(t) >= p.bound / 2 {
            continue;
        }
        if let Some((TtObs::Ref(x), rho)) = t.obs().split_last() {
            for e in &universe {
                if *e == Event::Tock || x.contains(e) {
                    continue;
                }
                let mut obs = rho.to_vec();
                obs.push(TtObs::evt(e.clone()));
                if !p.traces.contains(&TtTrace::new(obs)) {
                    return false;
                }
            }
        }
    }
    true
}

/// TTM2: a refusal without tock can be followed by tock. Completions that
/// would need an event cell beyond the bound are exempt.
pub fn check_ttm2(p: &TtDenotation) -> bool {
    for t in &p.traces {
        if cell_count(t) >= p.bound / 2 {
            continue;
        }
        if let Some(TtObs::Ref(x)) = t.obs().last() {
            if !x.contains(&Event::Tock)
                && !p.traces.contains(&t.appended(TtObs::evt(Event::Tock)))
            {
                return false;
            }
        }
    }
    true
}

/// TTM3: every refusal contains tick.
pub fn check_ttm3(p: &TtDenotation) -> bool {
    p.traces.iter().all(|t| t.refusals_contain_tick())
}

/// TT0: the empty trace is an observation of every process.
pub fn check_tt0(p: &TtDenotation) -> bool {
    p.traces.contains(&TtTrace::empty())
}

/// TT1w: closed under truncation (the prefix order without refusal
/// shrinking).
pub fn check_tt1w(p: &TtDenotation) -> bool {
    p.traces
        .iter()
        .all(|sigma| sigma.weak_prefix_downset().is_subset(&p.traces))
}

/// TT2, best-effort sketch: a refused set may grow by events that are not
/// enabled after the same history. Not part of any hard gate.
pub fn check_tt2_sketched(p: &TtDenotation) -> bool {
    let universe = p.alphabet.universe();
    for t in &p.traces {
        // Traces at the event-cell budget are exempt: the events enabled
        // after them are invisible within the bound, so the refused-set
        // growth they would mandate cannot be judged.
        if cell_count(t) >= p.bound / 2 {
            continue;
        }
        if let Some((TtObs::Ref(x), rho)) = t.obs().split_last() {
            let mut enabled: BTreeSet<Event> = BTreeSet::new();
            for e in &universe {
                if *e == Event::Tock {
                    if p.traces.contains(&t.appended(TtObs::evt(Event::Tock))) {
                        enabled.insert(e.clone());
                    }
                } else {
                    let mut obs = rho.to_vec();
                    obs.push(TtObs::evt(e.clone()));
                    if p.traces.contains(&TtTrace::new(obs)) {
                        enabled.insert(e.clone());
                    }
                }
            }
            let growable: BTreeSet<Event> = universe
                .iter()
                .filter(|e| !x.contains(e) && !enabled.contains(e))
                .cloned()
                .collect();
            for y in subsets(&growable) {
                let grown: BTreeSet<Event> = x.union(&y).cloned().collect();
                let mut obs = rho.to_vec();
                obs.push(TtObs::Ref(grown));
                if !p.traces.contains(&TtTrace::new(obs)) {
                    return false;
                }
            }
        }
    }
    true
}

/// TT4, best-effort sketch: tick may always be added to a refusal. Not part
/// of any hard gate.
pub fn check_tt4_sketched(p: &TtDenotation) -> bool {
    for t in &p.traces {
        for (i, o) in t.obs().iter().enumerate() {
            if let TtObs::Ref(x) = o {
                let mut grown = x.clone();
                grown.insert(Event::Tick);
                let mut obs = t.obs().to_vec();
                obs[i] = TtObs::Ref(grown);
                if !p.traces.contains(&TtTrace::new(obs)) {
                    return false;
                }
            }
        }
    }
    true
}

/// The least set containing `rho` that is closed under truncation and the
/// TTM1/TTM2 completions, with completions beyond `bound` exempt. `rho` must
/// be valid with every refusal containing tick.
pub fn tt_healthy_closure(
    rho: &TtTrace,
    alpha: &Alphabet,
    bound: usize,
) -> Result<BTreeSet<TtTrace>, TtError> {
    if !rho.is_valid() || !rho.refusals_contain_tick() {
        return Err(TtError::InvalidTrace);
    }
    let universe = alpha.universe();
    let mut out: BTreeSet<TtTrace> = BTreeSet::new();
    let mut work = alloc::vec![rho.clone()];
    while let Some(t) = work.pop() {
        if !out.insert(t.clone()) {
            continue;
        }
        for d in t.weak_prefix_downset() {
            if !out.contains(&d) {
                work.push(d);
            }
        }
        if let Some((TtObs::Ref(x), head)) = t.obs().split_last() {
            for e in &universe {
                if *e == Event::Tock || x.contains(e) {
                    continue;
                }
                let mut obs = head.to_vec();
                obs.push(TtObs::evt(e.clone()));
                let c = TtTrace::new(obs);
                if !out.contains(&c) {
                    work.push(c);
                }
            }
            if !x.contains(&Event::Tock) && t.len() + 1 <= bound {
                let c = t.appended(TtObs::evt(Event::Tock));
                if !out.contains(&c) {
                    work.push(c);
                }
            }
        }
    }
    Ok(out)
}

/// The upper adjoint of `mk_tt1`: the largest maximal-flavour set whose
/// closure sits inside `p`. Membership of a candidate reduces to its least
/// healthy closure fitting, because the closure of a union is the union of
/// closures. `p` must be healthy at bound `k + 1` so completions at full
/// length are visible; the result is bounded by `k`.
pub fn un_tt1(p: &TtDenotation, k: usize) -> TtDenotation {
    let mut traces = BTreeSet::new();
    for rho in &p.traces {
        // Candidates up to the closure bound `k + 1` are judgeable: their
        // in-bound completions are all visible. Cutting at `k` would drop
        // the preimages of full-length images and break the composite
        // adjunction at the bound edge.
        if rho.len() > k + 1 || !rho.refusals_contain_tick() {
            continue;
        }
        let closure = tt_healthy_closure(rho, &p.alphabet, k + 1).expect("member of a valid set");
        let expanded: BTreeSet<TtTrace> = closure
            .iter()
            .flat_map(|t| t.prefix_downset())
            .collect();
        if expanded.is_subset(&p.traces) {
            traces.insert(rho.clone());
        }
    }
    TtDenotation {
        traces,
        bound: k,
        alphabet: p.alphabet.clone(),
        flavour: Flavour::Maximal,
    }
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

    fn den(traces: &[TtTrace], alpha: &Alphabet, bound: usize, flavour: Flavour) -> TtDenotation {
        TtDenotation {
            traces: traces.iter().cloned().collect(),
            bound,
            alphabet: alpha.clone(),
            flavour,
        }
    }

    #[test]
    fn mk_tt1_examples() {
        let alpha = Alphabet::from_names(["a"]);
        let just_empty = den(&[TtTrace::empty()], &alpha, 2, Flavour::Maximal);
        assert_eq!(mk_tt1(&just_empty).traces, just_empty.traces);

        let p = den(
            &[TtTrace::new(alloc::vec![refusal(&["a", "tick"])]), TtTrace::empty()],
            &alpha,
            2,
            Flavour::Maximal,
        );
        let expect: BTreeSet<TtTrace> = [
            TtTrace::empty(),
            TtTrace::new(alloc::vec![refusal(&[])]),
            TtTrace::new(alloc::vec![refusal(&["a"])]),
            TtTrace::new(alloc::vec![refusal(&["tick"])]),
            TtTrace::new(alloc::vec![refusal(&["a", "tick"])]),
        ]
        .into_iter()
        .collect();
        assert_eq!(mk_tt1(&p).traces, expect);
    }

    #[test]
    fn mk_tt1_fixpoint_iff_closed() {
        let alpha = Alphabet::from_names(["a"]);
        let closed = mk_tt1(&den(
            &[TtTrace::new(alloc::vec![
                refusal(&["tick"]),
                TtObs::evt(Event::Tock),
            ])],
            &alpha,
            3,
            Flavour::Maximal,
        ));
        assert_eq!(mk_tt1(&closed).traces, closed.traces);
        let open = den(
            &[TtTrace::new(alloc::vec![TtObs::evt(ev("a"))])],
            &alpha,
            3,
            Flavour::Maximal,
        );
        assert_ne!(mk_tt1(&open).traces, open.traces);
    }

    #[test]
    fn ttm_checker_examples() {
        let alpha = Alphabet::from_names(["a", "b"]);
        let top = den(
            &[TtTrace::empty(), TtTrace::new(alloc::vec![refusal(&["a", "b", "tick", "tock"])])],
            &alpha,
            2,
            Flavour::Maximal,
        );
        assert!(check_ttm1(&top) && check_ttm2(&top) && check_ttm3(&top));

        let missing = den(
            &[TtTrace::empty(), TtTrace::new(alloc::vec![refusal(&["tick"])])],
            &alpha,
            2,
            Flavour::Maximal,
        );
        assert!(!check_ttm1(&missing));
        let completed = den(
            &[
                TtTrace::empty(),
                TtTrace::new(alloc::vec![refusal(&["tick"])]),
                TtTrace::new(alloc::vec![TtObs::evt(ev("a"))]),
                TtTrace::new(alloc::vec![TtObs::evt(ev("b"))]),
            ],
            &alpha,
            2,
            Flavour::Maximal,
        );
        assert!(check_ttm1(&completed));
        // tock completion is demanded within the bound
        assert!(!check_ttm2(&completed));

        let no_tick = den(
            &[TtTrace::empty(), TtTrace::new(alloc::vec![refusal(&["a", "b"])])],
            &alpha,
            2,
            Flavour::Maximal,
        );
        assert!(!check_ttm3(&no_tick));
    }

    #[test]
    fn weak_checker_examples() {
        let alpha = Alphabet::from_names(["a"]);
        let no_empty = den(
            &[TtTrace::new(alloc::vec![TtObs::evt(ev("a"))])],
            &alpha,
            2,
            Flavour::Maximal,
        );
        assert!(!check_tt0(&no_empty));
        let gap = den(
            &[TtTrace::new(alloc::vec![TtObs::evt(ev("a")), TtObs::evt(Event::Tick)])],
            &alpha,
            2,
            Flavour::Maximal,
        );
        assert!(!check_tt1w(&gap));
        let ok = den(
            &[
                TtTrace::empty(),
                TtTrace::new(alloc::vec![TtObs::evt(ev("a"))]),
                TtTrace::new(alloc::vec![TtObs::evt(ev("a")), TtObs::evt(Event::Tick)]),
            ],
            &alpha,
            2,
            Flavour::Maximal,
        );
        assert!(check_tt0(&ok) && check_tt1w(&ok));
    }

    #[test]
    fn closure_examples() {
        let alpha = Alphabet::from_names(["a", "b"]);
        assert_eq!(
            tt_healthy_closure(&TtTrace::empty(), &alpha, 3).unwrap(),
            BTreeSet::from([TtTrace::empty()])
        );
        assert_eq!(
            tt_healthy_closure(&TtTrace::new(alloc::vec![TtObs::evt(ev("a"))]), &alpha, 3).unwrap(),
            BTreeSet::from([TtTrace::empty(), TtTrace::new(alloc::vec![TtObs::evt(ev("a"))])])
        );
        let closure =
            tt_healthy_closure(&TtTrace::new(alloc::vec![refusal(&["a", "tick"])]), &alpha, 3)
                .unwrap();
        for t in [
            TtTrace::empty(),
            TtTrace::new(alloc::vec![refusal(&["a", "tick"])]),
            TtTrace::new(alloc::vec![TtObs::evt(ev("b"))]),
            TtTrace::new(alloc::vec![refusal(&["a", "tick"]), TtObs::evt(Event::Tock)]),
        ] {
            assert!(closure.contains(&t), "missing {t:?}");
        }
        assert_eq!(
            tt_healthy_closure(&TtTrace::new(alloc::vec![refusal(&["a"])]), &alpha, 3),
            Err(TtError::InvalidTrace)
        );
    }

    #[test]
    fn un_tt1_trivial_cases() {
        let alpha = Alphabet::from_names(["a"]);
        let just_empty = den(&[TtTrace::empty()], &alpha, 3, Flavour::Full);
        assert_eq!(un_tt1(&just_empty, 2).traces, BTreeSet::from([TtTrace::empty()]));
    }

    #[test]
    fn un_tt1_round_trip_on_small_sets() {
        // unTT1(mkTT1(Q)) ⊇ Q for a TTM-healthy Q with headroom
        let alpha = Alphabet::from_names(["a"]);
        let q = den(
            &[
                TtTrace::empty(),
                TtTrace::new(alloc::vec![TtObs::evt(ev("a"))]),
                TtTrace::new(alloc::vec![refusal(&["a", "tick"])]),
                TtTrace::new(alloc::vec![refusal(&["a", "tick"]), TtObs::evt(Event::Tock)]),
                TtTrace::new(alloc::vec![
                    refusal(&["a", "tick"]),
                    TtObs::evt(Event::Tock),
                    TtObs::evt(ev("a")),
                ]),
                TtTrace::new(alloc::vec![
                    refusal(&["a", "tick"]),
                    TtObs::evt(Event::Tock),
                    refusal(&["a", "tick"]),
                ]),
                TtTrace::new(alloc::vec![
                    refusal(&["a", "tick"]),
                    TtObs::evt(Event::Tock),
                    refusal(&["a", "tick"]),
                    TtObs::evt(Event::Tock),
                ]),
            ],
            &alpha,
            4,
            Flavour::Maximal,
        );
        let full = mk_tt1(&q);
        let back = un_tt1(&full, 3);
        for t in q.traces.iter().filter(|t| t.len() <= 3) {
            assert!(back.traces.contains(t), "missing {t:?}");
        }
    }
}
