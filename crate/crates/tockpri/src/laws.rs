//! Algebraic-law suites: generators, exhaustive tiny-universe engines, and
//! the suite runner behind `tockpri laws` and the acceptance gate.
//!
//! Suites: `lemma1` (prioritisation closure, monotonicity, idempotence,
//! union- and prefix-distribution), `lemma2` (sequence distribution with
//! tick maximal), `lemma3` (choice pruning), `closure` (healthiness of all
//! map images, and the subset-closure fixpoint characterisation), `galois`
//! (both adjunction steps and the composite), `theorem1` (the direct
//! tick-tock prioritisation against the round-trip composite), and
//! `examples` (the published golden listings).

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use tockpri_core::event::Alphabet;
use tockpri_core::fl::{
    check_fl0, check_fl1, check_fl2, check_fl3, denote_fl, fl_healthy_closure, prefix_compose,
    seq_compose, FlDenotation,
};
use tockpri_core::fl_pri::pri_fl;
use tockpri_core::fl_trace::{all_fl_tick_traces, Acceptance, FlTrace};
use tockpri_core::galois::{fl2tt, fl2ttm, tt2fl, ttm2fl};
use tockpri_core::process::{builtin_corpus, Definitions, ProcessExpr};
use tockpri_core::tt::{
    check_tt0, check_tt1w, check_tt2_sketched, check_tt4_sketched, check_ttm1, check_ttm2,
    check_ttm3, mk_tt1, un_tt1, Flavour, TtDenotation,
};
use tockpri_core::tt_pri::{pri_tt, priref, theorem1_check};
use tockpri_core::tt_trace::{all_valid_tt_traces, TtObs, TtTrace};
use tockpri_core::{Event, PriorityOrder};

pub const SUITES: &[&str] = &[
    "lemma1", "lemma2", "lemma3", "closure", "galois", "theorem1", "examples",
];

const MAX_WITNESSES: usize = 3;

/// One law's outcome: how many instances were checked and the minimal
/// witnesses of any violations (in generation order, capped).
#[derive(Debug, Clone)]
pub struct LawResult {
    pub name: String,
    pub instances: usize,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub laws: Vec<LawResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.laws.iter().all(|l| l.failures.is_empty())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "passed": self.passed(),
            "laws": self.laws.iter().map(|l| json!({
                "name": l.name,
                "instances": l.instances,
                "failures": l.failures,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "suite {}: {}\n",
            self.suite,
            if self.passed() { "PASS" } else { "FAIL" }
        );
        for l in &self.laws {
            let verdict = if l.failures.is_empty() { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "  {verdict} {} ({} instances)", l.name, l.instances);
            for w in &l.failures {
                let _ = writeln!(out, "    witness: {w}");
            }
        }
        out
    }
}

struct Law {
    result: LawResult,
}

impl Law {
    fn new(name: &str) -> Self {
        Law {
            result: LawResult { name: name.to_string(), instances: 0, failures: Vec::new() },
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.result.instances += 1;
        if !ok && self.result.failures.len() < MAX_WITNESSES {
            self.result.failures.push(witness());
        }
    }

    fn into_result(self) -> LawResult {
        self.result
    }
}

fn ab() -> Alphabet {
    Alphabet::from_names(["a", "b"])
}

fn sa() -> Alphabet {
    Alphabet::from_names(["a"])
}

fn order(pairs: &[(&str, &str)]) -> PriorityOrder {
    PriorityOrder::new(
        pairs
            .iter()
            .map(|(lo, hi)| (Event::from_name(lo), Event::from_name(hi))),
    )
    .expect("order fixture is acyclic")
}

/// A healthy FL set: the union of 1–3 least healthy closures plus `⟨•⟩`,
/// with one cell of bound headroom above the deepest seed so completions
/// stay inside the bound.
fn gen_healthy_fl(
    rng: &mut ChaCha8Rng,
    pool: &[FlTrace],
    alpha: &Alphabet,
    bound: usize,
) -> FlDenotation {
    let mut traces: BTreeSet<FlTrace> = BTreeSet::from([FlTrace::null()]);
    for _ in 0..rng.gen_range(1..=3usize) {
        let seed = &pool[rng.gen_range(0..pool.len())];
        traces.extend(fl_healthy_closure(seed).expect("pool traces are tick-healthy"));
    }
    FlDenotation { traces, bound, alphabet: alpha.clone() }
}

fn gen_tt_subset(
    rng: &mut ChaCha8Rng,
    pool: &[TtTrace],
    alpha: &Alphabet,
    bound: usize,
) -> TtDenotation {
    let mut traces: BTreeSet<TtTrace> = BTreeSet::from([TtTrace::empty()]);
    for t in pool {
        if rng.gen_bool(0.25) {
            traces.insert(t.clone());
        }
    }
    TtDenotation { traces, bound, alphabet: alpha.clone(), flavour: Flavour::Full }
}

fn gen_expr(rng: &mut ChaCha8Rng, depth: usize) -> ProcessExpr {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..4) {
            0 => ProcessExpr::Stop,
            1 => ProcessExpr::Skip,
            2 => ProcessExpr::Div,
            _ => ProcessExpr::Wait(1),
        };
    }
    let e = if rng.gen_bool(0.5) { Event::sym("a") } else { Event::sym("b") };
    match rng.gen_range(0..6) {
        0 => ProcessExpr::prefix(e, gen_expr(rng, depth - 1)),
        1 => ProcessExpr::tprefix(e, gen_expr(rng, depth - 1)),
        2 => ProcessExpr::ext(gen_expr(rng, depth - 1), gen_expr(rng, depth - 1)),
        3 => ProcessExpr::text(gen_expr(rng, depth - 1), gen_expr(rng, depth - 1)),
        4 => ProcessExpr::int(gen_expr(rng, depth - 1), gen_expr(rng, depth - 1)),
        _ => ProcessExpr::seq(gen_expr(rng, depth - 1), gen_expr(rng, depth - 1)),
    }
}

fn fl_healthy(d: &FlDenotation) -> bool {
    check_fl0(d) && check_fl1(d) && check_fl2(d) && check_fl3(d)
}

fn den_corpus(name: &str, k: usize) -> FlDenotation {
    let spec = &builtin_corpus()[name];
    denote_fl(spec.main_expr(), &spec.defs, &spec.alphabet, k)
}

fn set_text<T: std::fmt::Debug>(s: &BTreeSet<T>) -> String {
    format!("{s:?}")
}

fn diff_text(lhs: &BTreeSet<FlTrace>, rhs: &BTreeSet<FlTrace>) -> String {
    let only_l: Vec<_> = lhs.difference(rhs).take(2).collect();
    let only_r: Vec<_> = rhs.difference(lhs).take(2).collect();
    format!("only-lhs {only_l:?}, only-rhs {only_r:?}")
}

// ---------------------------------------------------------------------------
// Exhaustive tiny-universe engines
// ---------------------------------------------------------------------------

/// Every nonempty prefix-order downset of the valid tick-tock traces at the
/// given bound — exactly the TT1-healthy full trace sets over that universe
/// (the healthiness conditions never lengthen a trace, so a healthy set is
/// determined within the bounded universe).
pub fn all_full_healthy_sets(alpha: &Alphabet, bound: usize) -> Vec<BTreeSet<TtTrace>> {
    let pool = all_valid_tt_traces(alpha, bound, false);
    let n = pool.len();
    assert!(n <= 63, "universe too large for mask enumeration");
    // A linear extension of the prefix order (Kahn's algorithm), so every
    // strict predecessor of an element precedes it in `ordered`.
    let below: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| i != j && pool[i].prefix_leq(&pool[j]))
                .collect()
        })
        .collect();
    let mut placed = vec![false; n];
    let mut ordered: Vec<TtTrace> = Vec::with_capacity(n);
    let mut place_of = vec![0usize; n];
    while ordered.len() < n {
        let next = (0..n)
            .find(|&j| !placed[j] && (0..n).all(|i| placed[i] || !below[i][j]))
            .expect("the prefix order is acyclic");
        placed[next] = true;
        place_of[next] = ordered.len();
        ordered.push(pool[next].clone());
    }
    let mut preds = vec![0u64; n];
    for i in 0..n {
        for j in 0..n {
            if below[i][j] {
                preds[place_of[j]] |= 1 << place_of[i];
            }
        }
    }
    let mut out = Vec::new();
    let mut stack = vec![(0usize, 0u64)];
    while let Some((j, mask)) = stack.pop() {
        if j == n {
            if mask != 0 {
                let set: BTreeSet<TtTrace> = (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| ordered[i].clone())
                    .collect();
                out.push(set);
            }
            continue;
        }
        stack.push((j + 1, mask));
        if preds[j] & !mask == 0 {
            stack.push((j + 1, mask | (1 << j)));
        }
    }
    out
}

/// The least healthy FL set containing each tick-healthy trace of at most
/// `k` cells. Every healthy set over the bounded universe is a union of
/// these, and both adjoints distribute over such unions, so checking a law
/// on the principals covers the whole lattice.
pub fn principal_fl_sets(alpha: &Alphabet, k: usize, bound: usize) -> Vec<FlDenotation> {
    all_fl_tick_traces(alpha, k)
        .iter()
        .map(|rho| {
            let mut traces = fl_healthy_closure(rho).expect("tick-healthy by construction");
            traces.insert(FlTrace::null());
            FlDenotation { traces, bound, alphabet: alpha.clone() }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

fn suite_lemma1(seed: u64) -> SuiteReport {
    let alpha = ab();
    let pool: Vec<FlTrace> = all_fl_tick_traces(&alpha, 2).into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let orders = [
        ("a<b", order(&[("a", "b")])),
        ("b<a", order(&[("b", "a")])),
        ("empty", PriorityOrder::empty()),
        ("a<b,tock<b", order(&[("a", "b"), ("tock", "b")])),
    ];
    let mut closure = Law::new("closure: priFL preserves FL0-FL3");
    let mut mono = Law::new("monotonicity: P ⊆ Q implies priFL(P) ⊆ priFL(Q)");
    let mut idem = Law::new("idempotence: priFL ∘ priFL = priFL");
    let mut union = Law::new("union distribution: priFL(P ∪ Q) = priFL(P) ∪ priFL(Q)");
    let mut prefix = Law::new("prefix distribution (maximal event)");
    for i in 0..110 {
        let (oname, p) = &orders[i % orders.len()];
        let d = gen_healthy_fl(&mut rng, &pool, &alpha, 3);
        let e = gen_healthy_fl(&mut rng, &pool, &alpha, 3);
        let pd = pri_fl(p, &d);
        closure.check(fl_healthy(&pd), || {
            format!("order {oname}, P = {}", set_text(&d.traces))
        });
        let mut u = d.clone();
        u.traces.extend(e.traces.iter().cloned());
        let pu = pri_fl(p, &u);
        mono.check(pd.traces.is_subset(&pu.traces), || {
            format!("order {oname}, {}", diff_text(&pd.traces, &pu.traces))
        });
        idem.check(pri_fl(p, &pd) == pd, || {
            format!("order {oname}, P = {}", set_text(&d.traces))
        });
        let pe = pri_fl(p, &e);
        let mut rhs = pd.clone();
        rhs.traces.extend(pe.traces.iter().cloned());
        union.check(pu.traces == rhs.traces, || {
            format!("order {oname}, {}", diff_text(&pu.traces, &rhs.traces))
        });
        for ename in ["a", "b"] {
            let ev = Event::sym(ename);
            if !p.is_maximal(&ev) {
                continue;
            }
            let lhs = pri_fl(p, &prefix_compose(&ev, &d));
            let r = prefix_compose(&ev, &pd);
            prefix.check(lhs.traces == r.traces, || {
                format!("order {oname}, event {ename}, {}", diff_text(&lhs.traces, &r.traces))
            });
        }
    }
    SuiteReport {
        suite: "lemma1".into(),
        laws: vec![
            closure.into_result(),
            mono.into_result(),
            idem.into_result(),
            union.into_result(),
            prefix.into_result(),
        ],
    }
}

fn suite_lemma2(seed: u64) -> SuiteReport {
    let alpha = ab();
    let pool_p: Vec<FlTrace> = all_fl_tick_traces(&alpha, 2).into_iter().collect();
    let pool_q: Vec<FlTrace> = all_fl_tick_traces(&alpha, 1).into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5e62);
    let orders = [
        ("a<b", order(&[("a", "b")])),
        ("empty", PriorityOrder::empty()),
        ("a<b,a<tock", order(&[("a", "b"), ("a", "tock")])),
    ];
    let mut law = Law::new("sequence distribution with tick maximal");
    for i in 0..102 {
        let (oname, p) = &orders[i % orders.len()];
        assert!(p.is_maximal(&Event::Tick));
        let dp = gen_healthy_fl(&mut rng, &pool_p, &alpha, 3);
        let dq = gen_healthy_fl(&mut rng, &pool_q, &alpha, 2);
        let lhs = pri_fl(p, &seq_compose(&dp, &dq, 2).expect("matched bounds"));
        let rhs = seq_compose(&pri_fl(p, &dp), &pri_fl(p, &dq), 2).expect("matched bounds");
        law.check(lhs.traces == rhs.traces, || {
            format!(
                "order {oname}, P = {}, Q = {}, {}",
                set_text(&dp.traces),
                set_text(&dq.traces),
                diff_text(&lhs.traces, &rhs.traces)
            )
        });
    }
    SuiteReport { suite: "lemma2".into(), laws: vec![law.into_result()] }
}

fn suite_lemma3(seed: u64) -> SuiteReport {
    let alpha = ab();
    let defs = Definitions::new();
    let p = order(&[("a", "b")]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x13);
    let mut law = Law::new("choice pruning: a<b drops the a-branch of b->P [] a->Q");
    for _ in 0..100 {
        let ep = gen_expr(&mut rng, 2);
        let eq = gen_expr(&mut rng, 2);
        let choice = ProcessExpr::ext(
            ProcessExpr::prefix(Event::sym("b"), ep.clone()),
            ProcessExpr::prefix(Event::sym("a"), eq.clone()),
        );
        let kept = ProcessExpr::prefix(Event::sym("b"), ep.clone());
        for k in 0..=2 {
            let lhs = pri_fl(&p, &denote_fl(&choice, &defs, &alpha, k));
            let rhs = pri_fl(&p, &denote_fl(&kept, &defs, &alpha, k));
            law.check(lhs.traces == rhs.traces, || {
                format!("k={k}, P={ep:?}, Q={eq:?}, {}", diff_text(&lhs.traces, &rhs.traces))
            });
        }
    }
    SuiteReport { suite: "lemma3".into(), laws: vec![law.into_result()] }
}

fn tt_full_healthy(p: &TtDenotation) -> bool {
    check_tt0(p) && mk_tt1(p).traces == p.traces && check_tt2_sketched(p) && check_tt4_sketched(p)
}

fn ttm_healthy(p: &TtDenotation) -> bool {
    check_tt0(p) && check_tt1w(p) && check_ttm1(p) && check_ttm2(p) && check_ttm3(p)
}

fn suite_closure(seed: u64) -> SuiteReport {
    let alpha = ab();
    let pool: Vec<FlTrace> = all_fl_tick_traces(&alpha, 2).into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc105);
    let mut img_ttm = Law::new("fl2ttm images pass TT0, TT1w, TTM1-TTM3");
    let mut img_full = Law::new("mkTT1 images pass TT0, the TT1 fixpoint, TT2*, TT4*");
    let mut img_fl = Law::new("ttm2fl images pass FL0-FL3");
    let mut fixpoint = Law::new("mkTT1 fixpoint iff closed under the prefix order");

    let mut subjects: Vec<(String, FlDenotation)> = Vec::new();
    for name in ["R", "S", "T", "priT", "K"] {
        for k in 0..=2 {
            subjects.push((format!("corpus {name} k={k}"), den_corpus(name, k)));
        }
    }
    for i in 0..60 {
        subjects.push((
            format!("generated #{i}"),
            gen_healthy_fl(&mut rng, &pool, &alpha, 3),
        ));
    }
    for (label, d) in &subjects {
        let img = fl2ttm(d).expect("subjects are healthy");
        img_ttm.check(ttm_healthy(&img), || label.clone());
        let full = mk_tt1(&img);
        img_full.check(tt_full_healthy(&full), || label.clone());
        // Query depth is capped at 2: the candidate universe grows steeply
        // with depth and the healthiness content is the same.
        let back = ttm2fl(&img, d.bound.min(2));
        img_fl.check(fl_healthy(&back), || label.clone());
    }

    for (alpha, bound) in [(sa(), 2), (ab(), 2)] {
        let pool: Vec<TtTrace> = all_valid_tt_traces(&alpha, bound, false);
        for _ in 0..50 {
            let d = gen_tt_subset(&mut rng, &pool, &alpha, bound);
            let fixed = mk_tt1(&d).traces == d.traces;
            // Independent reading of TT1-closedness, straight from the
            // prefix relation over the whole bounded universe.
            let closed = pool
                .iter()
                .all(|rho| !d.traces.iter().any(|s| rho.prefix_leq(s)) || d.traces.contains(rho));
            fixpoint.check(fixed == closed, || {
                format!("|Σ|={}, P = {}", alpha.sigma().len(), set_text(&d.traces))
            });
        }
    }

    SuiteReport {
        suite: "closure".into(),
        laws: vec![
            img_ttm.into_result(),
            img_full.into_result(),
            img_fl.into_result(),
            fixpoint.into_result(),
        ],
    }
}

fn suite_galois(seed: u64) -> SuiteReport {
    let alpha = sa();
    let mut step1 = Law::new("step 1 adjunction: fl2ttm(Q) ⊆ P iff Q ⊆ ttm2fl(P) (principal lattice, Σ={a})");
    let mut step1_unit = Law::new("step 1 unit and counit");
    let mut step2 = Law::new("step 2 adjunction: mkTT1(Q) ⊆ P iff Q ⊆ unTT1(P) (exhaustive, Σ={a}, bound 2)");
    let mut comp_counit = Law::new("composite counit: fl2tt(tt2fl(P)) ⊆ P (exhaustive, Σ={a}, bound 2)");
    let mut comp_unit = Law::new("composite unit: Q ⊆ tt2fl(fl2tt(Q))");
    let mut mono = Law::new("monotonicity of all four adjoints (randomised, Σ={a,b})");

    // --- Step 1, exhaustively over the principal-closure lattice at k = 1.
    // Both directions of the adjunction distribute over unions of healthy
    // sets, so the principals (with pairwise unions as corroboration) cover
    // every healthy Q; the P side ranges over the image lattice.
    // Bound 2: closures of one-cell seeds may complete into a second cell.
    let principals = principal_fl_sets(&alpha, 1, 2);
    let mut qs: Vec<FlDenotation> = principals.clone();
    for i in 0..principals.len() {
        for j in (i + 1)..principals.len() {
            let mut u = principals[i].clone();
            u.traces.extend(principals[j].traces.iter().cloned());
            qs.push(u);
        }
    }
    let mut ps: Vec<TtDenotation> = Vec::new();
    let mut seen = BTreeSet::new();
    let images: Vec<TtDenotation> =
        principals.iter().map(|q| fl2ttm(q).expect("principals are healthy")).collect();
    for i in 0..images.len() {
        for j in i..images.len() {
            let mut u = images[i].clone();
            u.traces.extend(images[j].traces.iter().cloned());
            if seen.insert(u.traces.clone()) {
                ps.push(u);
            }
        }
    }
    let backs: Vec<BTreeSet<FlTrace>> = ps.iter().map(|p| ttm2fl(p, 2).traces).collect();
    for q in &qs {
        let img = fl2ttm(q).expect("healthy by construction");
        step1_unit.check(q.traces.is_subset(&ttm2fl(&img, 2).traces), || {
            format!("unit fails for Q = {}", set_text(&q.traces))
        });
        for (p, back) in ps.iter().zip(&backs) {
            let fwd = img.traces.is_subset(&p.traces);
            let bwd = q.traces.is_subset(back);
            step1.check(fwd == bwd, || {
                format!(
                    "Q = {}, P = {} (forward {fwd}, backward {bwd})",
                    set_text(&q.traces),
                    set_text(&p.traces)
                )
            });
        }
    }
    for (p, back) in ps.iter().zip(&backs) {
        let round = fl2ttm(&FlDenotation {
            traces: back.clone(),
            bound: 2,
            alphabet: alpha.clone(),
        })
        .expect("ttm2fl images are healthy");
        step1_unit.check(round.traces.is_subset(&p.traces), || {
            format!("counit fails for P = {}", set_text(&p.traces))
        });
    }

    // --- Step 2 and the composite, exhaustively over every TT1-healthy
    // full set at Σ={a}, bound 2.
    let downsets = all_full_healthy_sets(&alpha, 2);
    let q_pool = all_valid_tt_traces(&alpha, 1, true);
    let mut q_cands: Vec<(BTreeSet<TtTrace>, BTreeSet<TtTrace>)> = Vec::new();
    for mask in 0u32..(1 << q_pool.len()) {
        let traces: BTreeSet<TtTrace> = q_pool
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, t)| t.clone())
            .collect();
        // The adjunction is stated for TTM-healthy Q at the matched bound
        // with headroom; a set that is only "healthy" thanks to the
        // bound-1 completion exemption is out of scope.
        let den = TtDenotation {
            traces: traces.clone(),
            bound: 2,
            alphabet: alpha.clone(),
            flavour: Flavour::Maximal,
        };
        if !ttm_healthy(&den) {
            continue;
        }
        let closed = mk_tt1(&den).traces;
        q_cands.push((traces, closed));
    }
    for traces in &downsets {
        let p = TtDenotation {
            traces: traces.clone(),
            bound: 2,
            alphabet: alpha.clone(),
            flavour: Flavour::Full,
        };
        let u = un_tt1(&p, 1).traces;
        for (q, mkq) in &q_cands {
            let fwd = mkq.is_subset(&p.traces);
            let bwd = q.is_subset(&u);
            step2.check(fwd == bwd, || {
                format!(
                    "Q = {}, P = {} (forward {fwd}, backward {bwd})",
                    set_text(q),
                    set_text(&p.traces)
                )
            });
        }
        let back = tt2fl(&p, 1);
        let round = fl2tt(&back).expect("tt2fl images are healthy");
        comp_counit.check(round.traces.is_subset(&p.traces), || {
            format!("P = {}", set_text(&p.traces))
        });
    }

    // --- Composite unit on the principal lattice at bound 2.
    for q in principal_fl_sets(&alpha, 1, 2) {
        let fwd = fl2tt(&q).expect("principals are healthy");
        let back = tt2fl(&fwd, 2);
        comp_unit.check(q.traces.is_subset(&back.traces), || {
            format!("Q = {}", set_text(&q.traces))
        });
    }

    // --- Randomised monotonicity at Σ={a,b}.
    let alpha2 = ab();
    let pool: Vec<FlTrace> = all_fl_tick_traces(&alpha2, 2).into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9a10);
    for _ in 0..40 {
        let d = gen_healthy_fl(&mut rng, &pool, &alpha2, 3);
        let mut u = d.clone();
        u.traces
            .extend(gen_healthy_fl(&mut rng, &pool, &alpha2, 3).traces);
        let (id, iu) = (fl2ttm(&d).unwrap(), fl2ttm(&u).unwrap());
        let fl2ttm_mono = id.traces.is_subset(&iu.traces);
        let ttm2fl_mono = ttm2fl(&id, 2).traces.is_subset(&ttm2fl(&iu, 2).traces);
        let (fd, fu) = (mk_tt1(&id), mk_tt1(&iu));
        let mk_mono = fd.traces.is_subset(&fu.traces);
        let un_mono = un_tt1(&fd, 2).traces.is_subset(&un_tt1(&fu, 2).traces);
        mono.check(fl2ttm_mono && ttm2fl_mono && mk_mono && un_mono, || {
            format!(
                "fl2ttm {fl2ttm_mono}, ttm2fl {ttm2fl_mono}, mkTT1 {mk_mono}, unTT1 {un_mono} \
                 for P = {}",
                set_text(&d.traces)
            )
        });
    }

    SuiteReport {
        suite: "galois".into(),
        laws: vec![
            step1.into_result(),
            step1_unit.into_result(),
            step2.into_result(),
            comp_counit.into_result(),
            comp_unit.into_result(),
            mono.into_result(),
        ],
    }
}

/// Full-strength TT2 on a plain bounded downset: behind every trailing
/// stable refusal, an event that cannot happen next must be refusable
/// alongside it. A bounded truncation of a healthy process keeps the grown
/// refusal (it is no longer than the trace itself), so unlike the
/// image-oriented sketched checker this needs no cell-budget exemption —
/// only tock, whose performance witness extends the trace, is skipped at
/// the bound.
fn tt2_on_downset(q: &TtDenotation) -> bool {
    let universe = q.alphabet.universe();
    for t in &q.traces {
        for (i, o) in t.obs().iter().enumerate() {
            let x = match o {
                TtObs::Ref(x) => x,
                _ => continue,
            };
            let sigma = &t.obs()[..i];
            let trailing = i + 1 == t.len();
            for e in &universe {
                if x.contains(e) {
                    continue;
                }
                let performable = if *e == Event::Tock {
                    if !trailing {
                        // a mid-trace refusal is already followed by tock
                        continue;
                    }
                    if t.len() + 1 > q.bound {
                        continue;
                    }
                    q.traces.contains(&t.appended(TtObs::evt(Event::Tock)))
                } else {
                    let mut obs = sigma.to_vec();
                    obs.push(TtObs::evt(e.clone()));
                    q.traces.contains(&TtTrace::new(obs))
                };
                if !performable {
                    let mut grown = x.clone();
                    grown.insert(e.clone());
                    let mut obs = t.obs().to_vec();
                    obs[i] = TtObs::Ref(grown);
                    if !q.traces.contains(&TtTrace::new(obs)) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn suite_theorem1(seed: u64, depth: usize) -> SuiteReport {
    let mut corpus = Law::new("theorem 1 on the corpus (k ≤ 2)");
    let mut trivial = Law::new("theorem 1 on div");
    let mut exhaustive =
        Law::new("theorem 1 exhaustive over TT-healthy sets (Σ={a}, bound 2)");
    let mut random = Law::new("theorem 1 randomised (Σ={a,b})");

    let kmax = depth.min(2);
    for name in ["R", "S", "T", "priT", "K"] {
        let spec = &builtin_corpus()[name];
        for k in 0..=kmax {
            let d = den_corpus(name, k + 1);
            let q = fl2tt(&d).expect("corpus is healthy");
            for (oname, p) in [
                ("declared", spec.order.clone()),
                ("empty", PriorityOrder::empty()),
            ] {
                corpus.check(theorem1_check(&p, &q, k), || {
                    format!("{name} at k={k} with the {oname} order")
                });
            }
        }
    }

    let alpha = sa();
    let div = TtDenotation {
        traces: BTreeSet::from([TtTrace::empty()]),
        bound: 2,
        alphabet: alpha.clone(),
        flavour: Flavour::Full,
    };
    for p in [PriorityOrder::empty(), order(&[("a", "tick")]), order(&[("a", "tock")])] {
        trivial.check(theorem1_check(&p, &div, 1), || format!("order {:?}", p.pairs()));
    }

    // Orders keep tock incomparable-from-below: an ordinary event under
    // tock is outside the theorem's scope, because a stable acceptance
    // without tock licenses the event in FL while a tick-tock trace has
    // no way to record that refusal before a non-tock event.
    let orders = [order(&[("a", "tick")]), order(&[("tock", "a")])];
    for traces in all_full_healthy_sets(&alpha, 2) {
        let q = TtDenotation {
            traces,
            bound: 2,
            alphabet: alpha.clone(),
            flavour: Flavour::Full,
        };
        // The theorem presumes full TT-healthiness; downset closure alone
        // admits sets that no healthy process truncates to — refusals
        // without a tick-extended counterpart, or unperformable events
        // missing from a stable refusal — and those genuinely break the
        // round trip.
        if !tt2_on_downset(&q) || !check_tt4_sketched(&q) {
            continue;
        }
        for p in &orders {
            exhaustive.check(theorem1_check(p, &q, 1), || {
                format!("order {:?}, P = {}", p.pairs(), set_text(&q.traces))
            });
        }
    }

    let alpha2 = ab();
    let pool: Vec<FlTrace> = all_fl_tick_traces(&alpha2, 2).into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7e01);
    let p = order(&[("a", "b")]);
    for _ in 0..20 {
        let d = gen_healthy_fl(&mut rng, &pool, &alpha2, 3);
        let q = fl2tt(&d).expect("generated sets are healthy");
        random.check(theorem1_check(&p, &q, 2), || {
            format!("P = {}", set_text(&d.traces))
        });
    }

    SuiteReport {
        suite: "theorem1".into(),
        laws: vec![
            corpus.into_result(),
            trivial.into_result(),
            exhaustive.into_result(),
            random.into_result(),
        ],
    }
}

/// The ten traces of the untimed choice `R = a -> SKIP [] b -> SKIP` at
/// depth 2.
pub fn golden_traces_r() -> BTreeSet<FlTrace> {
    let n = Acceptance::Null;
    let ab = Acceptance::set([Event::sym("a"), Event::sym("b")]);
    let mut out = BTreeSet::from([FlTrace::null(), FlTrace::just(ab.clone())]);
    for e in ["a", "b"] {
        for first in [n.clone(), ab.clone()] {
            out.insert(FlTrace::new(
                vec![cell(first.clone(), Event::sym(e))],
                n.clone(),
            ));
            out.insert(FlTrace::new(
                vec![cell(first, Event::sym(e)), cell(n.clone(), Event::Tick)],
                n.clone(),
            ));
        }
    }
    out
}

/// The six traces of `R` prioritised under a < b.
pub fn golden_traces_pri_r() -> BTreeSet<FlTrace> {
    let n = Acceptance::Null;
    let b = Acceptance::set([Event::sym("b")]);
    let mut out = BTreeSet::from([FlTrace::null(), FlTrace::just(b.clone())]);
    for first in [n.clone(), b] {
        out.insert(FlTrace::new(vec![cell(first.clone(), Event::sym("b"))], n.clone()));
        out.insert(FlTrace::new(
            vec![cell(first, Event::sym("b")), cell(n.clone(), Event::Tick)],
            n.clone(),
        ));
    }
    out
}

fn cell(acc: Acceptance, e: Event) -> tockpri_core::AccEventCell {
    tockpri_core::AccEventCell::new(acc, e).expect("golden cells are well-formed")
}

fn suite_examples() -> SuiteReport {
    let mut ex3 = Law::new("untimed choice golden listings (depth 2)");
    let mut ex2_fl = Law::new("timed fixtures: priFL fixes S and maps T to priT (k ≤ 3)");
    let mut ex24_tt = Law::new("tick-tock images: S and T coincide; priTT fixes T");
    let mut point = Law::new("priref point values");
    let mut extras = Law::new("derived tick-tock example values");

    let a_lt_b = order(&[("a", "b")]);
    let r = den_corpus("R", 2);
    ex3.check(r.traces == golden_traces_r(), || diff_text(&r.traces, &golden_traces_r()));
    let pr = pri_fl(&a_lt_b, &r);
    ex3.check(pr.traces == golden_traces_pri_r(), || {
        diff_text(&pr.traces, &golden_traces_pri_r())
    });

    for k in 1..=3 {
        let s = den_corpus("S", k);
        ex2_fl.check(pri_fl(&a_lt_b, &s).traces == s.traces, || format!("S at k={k}"));
        let t = den_corpus("T", k);
        let prit = den_corpus("priT", k);
        ex2_fl.check(pri_fl(&a_lt_b, &t).traces == prit.traces, || format!("T at k={k}"));
    }

    for k in 1..=3 {
        let s = fl2tt(&den_corpus("S", k)).expect("healthy");
        let t = fl2tt(&den_corpus("T", k)).expect("healthy");
        ex24_tt.check(s.traces == t.traces, || format!("fl2tt(S) vs fl2tt(T) at k={k}"));
    }
    let t3 = fl2tt(&den_corpus("T", 3)).expect("healthy");
    ex24_tt.check(pri_tt(&a_lt_b, &t3).traces == t3.traces, || {
        "priTT should leave T unchanged".to_string()
    });

    let t_tt = fl2tt(&den_corpus("T", 2)).expect("healthy");
    let empty_hist = TtTrace::empty();
    let v1 = priref(&a_lt_b, &empty_hist, &t_tt, &BTreeSet::new());
    point.check(v1 == BTreeSet::from([Event::sym("a")]), || format!("got {v1:?}"));
    let with_tock = order(&[("a", "b"), ("tock", "a")]);
    let s_set = BTreeSet::from([Event::sym("a"), Event::sym("b"), Event::Tick]);
    let v2 = priref(&with_tock, &empty_hist, &t_tt, &s_set);
    // The calculated refusal keeps only the three original events; see the
    // acceptance gate for the full account of the divergent expected value.
    point.check(v2 == s_set, || format!("got {v2:?}"));
    let k_tt = fl2tt(&den_corpus("K", 2)).expect("healthy");
    let f_lt_tick = order(&[("f", "tick")]);
    let v3 = priref(&f_lt_tick, &empty_hist, &k_tt, &BTreeSet::new());
    point.check(v3.is_empty(), || format!("got {v3:?}"));

    let r_tt = fl2tt(&den_corpus("R", 2)).expect("healthy");
    let b_skip = ProcessExpr::prefix(Event::sym("b"), ProcessExpr::Skip);
    let b_den = fl2tt(&denote_fl(&b_skip, &Definitions::new(), &ab(), 2)).expect("healthy");
    extras.check(pri_tt(&a_lt_b, &r_tt).traces == b_den.traces, || {
        "priTT(R) should equal the image of b -> SKIP".to_string()
    });
    let spec_t = &builtin_corpus()["T"];
    let t2 = fl2tt(&denote_fl(spec_t.main_expr(), &spec_t.defs, &spec_t.alphabet, 2))
        .expect("healthy");
    let un = un_tt1(&t2, 1);
    let want = TtTrace::new(vec![tockpri_core::TtObs::refusal([
        Event::sym("a"),
        Event::sym("b"),
        Event::Tick,
    ])]);
    let unwanted = TtTrace::new(vec![tockpri_core::TtObs::refusal([
        Event::sym("a"),
        Event::sym("b"),
        Event::Tick,
        Event::Tock,
    ])]);
    extras.check(un.traces.contains(&want) && !un.traces.contains(&unwanted), || {
        format!("unTT1(T) = {}", set_text(&un.traces))
    });
    let s_tt = fl2tt(&den_corpus("S", 3)).expect("healthy");
    let t_tt3 = fl2tt(&den_corpus("T", 3)).expect("healthy");
    extras.check(
        pri_tt(&a_lt_b, &s_tt).traces == pri_tt(&a_lt_b, &t_tt3).traces,
        || "priTT should not distinguish S and T".to_string(),
    );

    SuiteReport {
        suite: "examples".into(),
        laws: vec![
            ex3.into_result(),
            ex2_fl.into_result(),
            ex24_tt.into_result(),
            point.into_result(),
            extras.into_result(),
        ],
    }
}

/// Runs one named suite. Returns `None` for an unknown suite name.
pub fn run_suite(suite: &str, depth: usize, seed: u64) -> Option<SuiteReport> {
    Some(match suite {
        "lemma1" => suite_lemma1(seed),
        "lemma2" => suite_lemma2(seed),
        "lemma3" => suite_lemma3(seed),
        "closure" => suite_closure(seed),
        "galois" => suite_galois(seed),
        "theorem1" => suite_theorem1(seed, depth),
        "examples" => suite_examples(),
        _ => return None,
    })
}
