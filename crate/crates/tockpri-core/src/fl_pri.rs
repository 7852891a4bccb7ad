//! Prioritisation in the finite-linear model: `priacc` on acceptances, the
//! `pri` relation on traces, and the prioritisation operator on denotations.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::fl::FlDenotation;
use crate::fl_trace::{AccEventCell, Acceptance, FlTrace};
use crate::order::PriorityOrder;

/// Removes from a set acceptance every event with a strictly higher-priority
/// competitor in the same set. The null acceptance is untouched.
pub fn priacc(p: &PriorityOrder, z: &Acceptance) -> Acceptance {
    match z {
        Acceptance::Null => Acceptance::Null,
        Acceptance::Set(s) => Acceptance::Set(
            s.iter()
                .filter(|e| !s.iter().any(|b| p.lt(e, b)))
                .cloned()
                .collect(),
        ),
    }
}

/// The prioritisation relation: `rho` is an observation the prioritised
/// process can make when the original makes `sigma`. Traces must have the
/// same shape; final acceptances map through `priacc` exactly, cell
/// acceptances may additionally weaken to `•`, and a non-maximal event is
/// only kept when the prioritised acceptance visibly offers it.
pub fn pri_rel(p: &PriorityOrder, rho: &FlTrace, sigma: &FlTrace) -> bool {
    if rho.len() != sigma.len() {
        return false;
    }
    for (c, d) in rho.cells().iter().zip(sigma.cells().iter()) {
        if c.event() != d.event() {
            return false;
        }
        let pz = priacc(p, d.acc());
        if !c.acc().leq(&pz) {
            return false;
        }
        if !p.is_maximal(c.event()) && !pz.offers(c.event()) {
            return false;
        }
    }
    *rho.final_acc() == priacc(p, sigma.final_acc())
}

/// All traces related to `sigma`, built constructively: one acceptance choice
/// per cell, pruned as soon as a non-maximal event loses its offer.
fn pri_trace(p: &PriorityOrder, sigma: &FlTrace) -> Vec<FlTrace> {
    let mut prefixes: Vec<Vec<AccEventCell>> = alloc::vec![Vec::new()];
    for cell in sigma.cells() {
        let pz = priacc(p, cell.acc());
        if !p.is_maximal(cell.event()) && !pz.offers(cell.event()) {
            return Vec::new();
        }
        let mut accs = alloc::vec![Acceptance::Null];
        if pz != Acceptance::Null && pz.offers(cell.event()) {
            accs.push(pz);
        }
        let mut next = Vec::with_capacity(prefixes.len() * accs.len());
        for pre in &prefixes {
            for acc in &accs {
                let mut q = pre.clone();
                q.push(
                    AccEventCell::new(acc.clone(), cell.event().clone())
                        .expect("offer checked above"),
                );
                next.push(q);
            }
        }
        prefixes = next;
    }
    let fin = priacc(p, sigma.final_acc());
    prefixes
        .into_iter()
        .map(|cells| FlTrace::new(cells, fin.clone()))
        .collect()
}

/// The prioritised denotation: everything related to some member of `P`.
pub fn pri_fl(p: &PriorityOrder, den: &FlDenotation) -> FlDenotation {
    let mut traces = BTreeSet::new();
    for sigma in &den.traces {
        traces.extend(pri_trace(p, sigma));
    }
    FlDenotation { traces, bound: den.bound, alphabet: den.alphabet.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::{Alphabet, Event};
    use crate::fl::{check_fl0, check_fl1, check_fl2, check_fl3, denote_fl};
    use crate::process::{builtin_corpus, Definitions, ProcessExpr};

    fn ev(s: &str) -> Event {
        Event::from_name(s)
    }

    fn aset(names: &[&str]) -> Acceptance {
        Acceptance::set(names.iter().map(|s| ev(s)))
    }

    fn a_lt_b() -> PriorityOrder {
        PriorityOrder::new([(ev("a"), ev("b"))]).unwrap()
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

    #[test]
    fn priacc_examples() {
        let p = a_lt_b();
        assert_eq!(priacc(&p, &aset(&["a", "b"])), aset(&["b"]));
        assert_eq!(priacc(&p, &Acceptance::Null), Acceptance::Null);
        assert_eq!(priacc(&p, &aset(&["a", "tock"])), aset(&["a", "tock"]));
    }

    #[test]
    fn pri_rel_examples() {
        let p = a_lt_b();
        assert!(pri_rel(
            &p,
            &FlTrace::just(aset(&["b"])),
            &FlTrace::just(aset(&["a", "b"]))
        ));
        assert!(pri_rel(
            &p,
            &tr(&[(Acceptance::Null, "b")], Acceptance::Null),
            &tr(&[(aset(&["a", "b"]), "b")], Acceptance::Null),
        ));
        // a is not maximal and an unstable acceptance offers nothing
        assert!(!pri_rel(
            &p,
            &tr(&[(Acceptance::Null, "a")], Acceptance::Null),
            &tr(&[(Acceptance::Null, "a")], Acceptance::Null),
        ));
    }

    /// The six traces of the prioritised R at depth 2, as published.
    pub(crate) fn traces_pri_r() -> BTreeSet<FlTrace> {
        let n = Acceptance::Null;
        let b = aset(&["b"]);
        BTreeSet::from([
            FlTrace::null(),
            FlTrace::just(b.clone()),
            tr(&[(n.clone(), "b")], n.clone()),
            tr(&[(b.clone(), "b")], n.clone()),
            tr(&[(n.clone(), "b"), (n.clone(), "tick")], n.clone()),
            tr(&[(b.clone(), "b"), (n.clone(), "tick")], n.clone()),
        ])
    }

    #[test]
    fn pri_r_matches_published_listing() {
        let spec = &builtin_corpus()["R"];
        let r = denote_fl(spec.main_expr(), &spec.defs, &spec.alphabet, 2);
        assert_eq!(pri_fl(&a_lt_b(), &r).traces, traces_pri_r());
    }

    #[test]
    fn empty_order_is_identity_on_healthy_sets() {
        let empty = PriorityOrder::empty();
        for name in ["R", "S", "T", "K"] {
            let spec = &builtin_corpus()[name];
            for k in 0..=2 {
                let d = denote_fl(spec.main_expr(), &spec.defs, &spec.alphabet, k);
                assert_eq!(pri_fl(&empty, &d), d, "{name} at k={k}");
            }
        }
    }

    #[test]
    fn div_is_fixed() {
        let alpha = Alphabet::from_names(["a"]);
        let d = denote_fl(&ProcessExpr::Div, &Definitions::new(), &alpha, 3);
        assert_eq!(pri_fl(&a_lt_b(), &d), d);
    }

    #[test]
    fn constructive_matches_relation() {
        // cross-check pri_fl against the definitional filter over Chaos
        let alpha = Alphabet::from_names(["a", "b"]);
        let p = a_lt_b();
        let spec = &builtin_corpus()["T"];
        let den = denote_fl(spec.main_expr(), &spec.defs, &spec.alphabet, 2);
        let fast = pri_fl(&p, &den);
        let all = denote_fl(&ProcessExpr::Chaos, &Definitions::new(), &alpha, 2);
        let slow: BTreeSet<FlTrace> = all
            .traces
            .iter()
            .filter(|rho| den.traces.iter().any(|s| pri_rel(&p, rho, s)))
            .cloned()
            .collect();
        assert_eq!(fast.traces, slow);
    }

    #[test]
    fn pri_preserves_healthiness() {
        let p = a_lt_b();
        for name in ["R", "S", "T", "K"] {
            let spec = &builtin_corpus()[name];
            for k in 0..=3 {
                let d = denote_fl(spec.main_expr(), &spec.defs, &spec.alphabet, k);
                let pd = pri_fl(&p, &d);
                assert!(check_fl0(&pd) && check_fl1(&pd) && check_fl2(&pd) && check_fl3(&pd));
            }
        }
    }

    #[test]
    fn example_timed_choice_collapses() {
        // prioritising S leaves it fixed; prioritising T removes the a branch
        let corpus = builtin_corpus();
        let p = a_lt_b();
        for k in 0..=3 {
            let s = &corpus["S"];
            let ds = denote_fl(s.main_expr(), &s.defs, &s.alphabet, k);
            assert_eq!(pri_fl(&p, &ds), ds, "S fixed at k={k}");
            let t = &corpus["T"];
            let dt = denote_fl(t.main_expr(), &t.defs, &t.alphabet, k);
            let pt = &corpus["priT"];
            let dpt = denote_fl(pt.main_expr(), &pt.defs, &pt.alphabet, k);
            assert_eq!(pri_fl(&p, &dt).traces, dpt.traces, "T collapses at k={k}");
        }
    }
}
