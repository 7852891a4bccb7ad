//! The two-step Galois connection between the finite-linear and tick-tock
//! models: `fl2ttobs` on single traces, `fl2ttm`/`ttm2fl` between FL and
//! maximal tick-tock, and the composites `fl2tt`/`tt2fl`.

use alloc::collections::BTreeSet;
use core::fmt;

use crate::event::Alphabet;
use crate::event::Event;
use crate::fl::{
    check_fl0, check_fl1, check_fl2, check_fl3, fl_healthy_closure, FlDenotation,
};
use crate::fl_trace::{all_fl_tick_traces, Acceptance, FlTrace};
use crate::tt::{mk_tt1, un_tt1, Flavour, TtDenotation};
use crate::tt_trace::{TtObs, TtTrace};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GaloisError {
    /// The FL denotation handed to `fl2ttm` fails a healthiness condition.
    UnhealthyInput,
}

impl fmt::Display for GaloisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaloisError::UnhealthyInput => f.write_str("FL denotation is not healthy"),
        }
    }
}

/// Maps one FL trace to its tick-tock observation. Stable stops become
/// refusals of the complemented acceptance; an unstable tock truncates the
/// observation, discarding everything after it.
pub fn fl2ttobs(alpha: &Alphabet, rho: &FlTrace) -> TtTrace {
    let mut obs = alloc::vec::Vec::new();
    for (i, cell) in rho.cells().iter().enumerate() {
        if *cell.event() == Event::Tock {
            match cell.acc() {
                Acceptance::Null => return TtTrace::new(obs),
                Acceptance::Set(s) => {
                    obs.push(TtObs::Ref(alpha.complement(s)));
                    obs.push(TtObs::evt(Event::Tock));
                }
            }
        } else {
            obs.push(TtObs::evt(cell.event().clone()));
        }
        let _ = i;
    }
    match rho.final_acc() {
        Acceptance::Null => {}
        Acceptance::Set(s) => obs.push(TtObs::Ref(alpha.complement(s))),
    }
    TtTrace::new(obs)
}

/// The image of a healthy FL denotation in the maximal tick-tock model. A
/// trace of `k` cells maps to at most `2k + 1` observations (two per stable
/// tock cell, one for a stable final).
pub fn fl2ttm(p: &FlDenotation) -> Result<TtDenotation, GaloisError> {
    if !(check_fl0(p) && check_fl1(p) && check_fl2(p) && check_fl3(p)) {
        return Err(GaloisError::UnhealthyInput);
    }
    let traces: BTreeSet<TtTrace> =
        p.traces.iter().map(|rho| fl2ttobs(&p.alphabet, rho)).collect();
    Ok(TtDenotation {
        traces,
        bound: 2 * p.bound + 1,
        alphabet: p.alphabet.clone(),
        flavour: Flavour::Maximal,
    })
}

/// The upper adjoint of `fl2ttm`: all tick-healthy FL traces of at most `k`
/// cells whose least healthy closure maps inside `p`. Closure members that
/// overflow the cell bound are exempt, mirroring the headroom rule of the
/// FL2 checker; `p` should carry at least `2k + 1` observations of bound.
pub fn ttm2fl(p: &TtDenotation, k: usize) -> FlDenotation {
    let mut traces = BTreeSet::new();
    for rho in all_fl_tick_traces(&p.alphabet, k) {
        let closure = fl_healthy_closure(&rho).expect("enumerated traces are tick-healthy");
        let fits = closure.iter().all(|q| {
            q.len() > k || p.traces.contains(&fl2ttobs(&p.alphabet, q))
        });
        if fits {
            traces.insert(rho);
        }
    }
    FlDenotation { traces, bound: k, alphabet: p.alphabet.clone() }
}

/// FL to full tick-tock: the maximal image closed under the prefix order.
pub fn fl2tt(p: &FlDenotation) -> Result<TtDenotation, GaloisError> {
    Ok(mk_tt1(&fl2ttm(p)?))
}

/// Full tick-tock to FL: the upper adjoint of `fl2tt`, composed from the two
/// step adjoints. `p` should be healthy with one observation of headroom.
pub fn tt2fl(p: &TtDenotation, k: usize) -> FlDenotation {
    let ttm = un_tt1(p, p.bound.saturating_sub(1));
    ttm2fl(&ttm, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::{builtin_corpus, Definitions, ProcessExpr};
    use crate::tt::{check_tt0, check_tt1w, check_ttm1, check_ttm2, check_ttm3};
    use crate::{fl::denote_fl, fl_trace::AccEventCell};

    fn ev(s: &str) -> Event {
        Event::from_name(s)
    }

    fn aset(names: &[&str]) -> Acceptance {
        Acceptance::set(names.iter().map(|s| ev(s)))
    }

    fn tr(cells: &[(Acceptance, &str)], fin: Acceptance) -> FlTrace {
        FlTrace::new(
            cells
                .iter()
                .map(|(a, e)| AccEventCell::new(a.clone(), ev(e)).unwrap())
                .collect(),
            fin,
        )
    }

    fn refusal(names: &[&str]) -> TtObs {
        TtObs::refusal(names.iter().map(|s| ev(s)))
    }

    fn den_corpus(name: &str, k: usize) -> FlDenotation {
        let spec = &builtin_corpus()[name];
        denote_fl(spec.main_expr(), &spec.defs, &spec.alphabet, k)
    }

    #[test]
    fn fl2ttobs_clauses() {
        let alpha = Alphabet::from_names(["a", "b"]);
        assert_eq!(fl2ttobs(&alpha, &FlTrace::null()), TtTrace::empty());
        assert_eq!(
            fl2ttobs(&alpha, &FlTrace::just(aset(&["a", "b"]))),
            TtTrace::new(alloc::vec![refusal(&["tick", "tock"])])
        );
        assert_eq!(
            fl2ttobs(
                &alpha,
                &tr(
                    &[(aset(&["tock"]), "tock"), (Acceptance::Null, "a")],
                    Acceptance::Null
                )
            ),
            TtTrace::new(alloc::vec![
                refusal(&["a", "b", "tick"]),
                TtObs::evt(Event::Tock),
                TtObs::evt(ev("a")),
            ])
        );
        // an unstable tock truncates no matter what follows
        assert_eq!(
            fl2ttobs(
                &alpha,
                &tr(
                    &[(Acceptance::Null, "tock"), (Acceptance::Null, "a")],
                    aset(&["b"])
                )
            ),
            TtTrace::empty()
        );
    }

    #[test]
    fn fl2ttobs_valid_on_tick_healthy() {
        let alpha = Alphabet::from_names(["a"]);
        for rho in all_fl_tick_traces(&alpha, 2) {
            assert!(fl2ttobs(&alpha, &rho).is_valid(), "invalid image of {rho}");
        }
    }

    #[test]
    fn fl2ttm_examples() {
        let alpha = Alphabet::from_names(["a"]);
        let div = denote_fl(&ProcessExpr::Div, &Definitions::new(), &alpha, 3);
        assert_eq!(
            fl2ttm(&div).unwrap().traces,
            BTreeSet::from([TtTrace::empty()])
        );

        let t = fl2ttm(&den_corpus("T", 3)).unwrap();
        for want in [
            TtTrace::new(alloc::vec![refusal(&["tick"])]),
            TtTrace::new(alloc::vec![TtObs::evt(ev("a"))]),
            TtTrace::new(alloc::vec![TtObs::evt(ev("b"))]),
            TtTrace::new(alloc::vec![TtObs::evt(ev("a")), TtObs::evt(Event::Tick)]),
            TtTrace::new(alloc::vec![refusal(&["a", "b", "tick"])]),
            TtTrace::new(alloc::vec![refusal(&["a", "b", "tick"]), TtObs::evt(Event::Tock)]),
        ] {
            assert!(t.traces.contains(&want), "missing {want:?}");
        }

        let unhealthy = FlDenotation {
            traces: BTreeSet::from([FlTrace::just(aset(&["a"]))]),
            bound: 1,
            alphabet: alpha,
        };
        assert_eq!(fl2ttm(&unhealthy), Err(GaloisError::UnhealthyInput));
    }

    #[test]
    fn fl2ttm_image_is_ttm_healthy() {
        for name in ["R", "S", "T", "K"] {
            for k in 0..=3 {
                let img = fl2ttm(&den_corpus(name, k)).unwrap();
                assert!(check_tt0(&img), "{name} k={k} TT0");
                assert!(check_tt1w(&img), "{name} k={k} TT1w");
                assert!(check_ttm1(&img), "{name} k={k} TTM1");
                assert!(check_ttm2(&img), "{name} k={k} TTM2");
                assert!(check_ttm3(&img), "{name} k={k} TTM3");
            }
        }
    }

    #[test]
    fn ttm2fl_examples() {
        let alpha = Alphabet::from_names(["a", "b"]);
        let just_empty = TtDenotation {
            traces: BTreeSet::from([TtTrace::empty()]),
            bound: 4,
            alphabet: alpha,
            flavour: Flavour::Maximal,
        };
        // at depth 0 only the null trace's closure maps inside; at depth ≥ 1
        // traces hidden behind an unstable tock also qualify, since the
        // truncation clause erases them
        assert_eq!(
            ttm2fl(&just_empty, 0).traces,
            BTreeSet::from([FlTrace::null()])
        );
        let deeper = ttm2fl(&just_empty, 1);
        assert!(deeper.traces.contains(&FlTrace::null()));
        assert!(deeper
            .traces
            .contains(&tr(&[(Acceptance::Null, "tock")], aset(&["a"]))));
        assert!(!deeper
            .traces
            .contains(&tr(&[(Acceptance::Null, "a")], Acceptance::Null)));

        // unit at one step: Q ⊆ ttm2fl(fl2ttm(Q)) with headroom
        for name in ["R", "S", "T", "K"] {
            let q = den_corpus(name, 2);
            let img = fl2ttm(&den_corpus(name, 3)).unwrap();
            let back = ttm2fl(&img, 2);
            assert!(
                q.traces.is_subset(&back.traces),
                "{name}: unit violated"
            );
        }

        let s_img = fl2ttm(&den_corpus("S", 3)).unwrap();
        assert!(!s_img
            .traces
            .contains(&TtTrace::new(alloc::vec![refusal(&["tick"])])));
        let back = ttm2fl(&s_img, 2);
        assert!(back
            .traces
            .contains(&tr(&[(Acceptance::Null, "a")], Acceptance::Null)));
        assert!(!back.traces.contains(&FlTrace::just(aset(&["a", "b", "tock"]))));
    }

    #[test]
    fn fl2tt_examples() {
        let alpha = Alphabet::from_names(["a"]);
        let div = denote_fl(&ProcessExpr::Div, &Definitions::new(), &alpha, 3);
        assert_eq!(
            fl2tt(&div).unwrap().traces,
            BTreeSet::from([TtTrace::empty()])
        );
        for k in 0..=3 {
            let s = fl2tt(&den_corpus("S", k)).unwrap();
            let t = fl2tt(&den_corpus("T", k)).unwrap();
            assert_eq!(s.traces, t.traces, "S and T indistinguishable at k={k}");
        }
    }

    #[test]
    fn tt2fl_examples() {
        let alpha = Alphabet::from_names(["a", "b"]);
        let just_empty = TtDenotation {
            traces: BTreeSet::from([TtTrace::empty()]),
            bound: 4,
            alphabet: alpha,
            flavour: Flavour::Full,
        };
        assert_eq!(
            tt2fl(&just_empty, 0).traces,
            BTreeSet::from([FlTrace::null()])
        );

        // unit and counit of the composed connection on corpus members
        for name in ["R", "T", "K"] {
            let q = den_corpus(name, 2);
            let big = fl2tt(&den_corpus(name, 3)).unwrap();
            let back = tt2fl(&big, 2);
            assert!(q.traces.is_subset(&back.traces), "{name}: unit violated");
            let fwd = fl2tt(&back).unwrap();
            assert!(
                fwd.traces.is_subset(&big.traces),
                "{name}: counit violated"
            );
        }
    }
}
