//! Finite-linear traces: alternating acceptances and events, ending in an
//! acceptance.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::event::{subsets, Alphabet, Event};

/// Either the null acceptance (stability was not observed) or the finite set
/// of events stably offered.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Acceptance {
    Null,
    Set(BTreeSet<Event>),
}

impl Acceptance {
    pub fn set<I: IntoIterator<Item = Event>>(events: I) -> Self {
        Acceptance::Set(events.into_iter().collect())
    }

    /// Membership in the finite-linear sense: always false on the null
    /// acceptance.
    pub fn offers(&self, e: &Event) -> bool {
        match self {
            Acceptance::Null => false,
            Acceptance::Set(s) => s.contains(e),
        }
    }

    /// The prefix order on acceptances: null below everything, sets only
    /// below themselves. There is no subset weakening.
    pub fn leq(&self, other: &Acceptance) -> bool {
        matches!(self, Acceptance::Null) || self == other
    }

    pub fn contains_tick(&self) -> bool {
        self.offers(&Event::Tick)
    }
}

impl fmt::Display for Acceptance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Acceptance::Null => f.write_str("•"),
            Acceptance::Set(s) => {
                f.write_str("{")?;
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

/// An acceptance followed by the event that was performed. If the acceptance
/// is a set, the event is a member of it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AccEventCell {
    acc: Acceptance,
    event: Event,
}

impl AccEventCell {
    /// Returns `None` when a set acceptance does not offer the event.
    pub fn new(acc: Acceptance, event: Event) -> Option<Self> {
        match &acc {
            Acceptance::Set(s) if !s.contains(&event) => None,
            _ => Some(AccEventCell { acc, event }),
        }
    }

    pub fn acc(&self) -> &Acceptance {
        &self.acc
    }

    pub fn event(&self) -> &Event {
        &self.event
    }
}

/// One finite-linear observation: a sequence of acceptance-event cells
/// followed by a final acceptance.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlTrace {
    cells: Vec<AccEventCell>,
    final_acc: Acceptance,
}

/// Left operand of a concatenation must end in the null acceptance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcatError;

impl fmt::Display for ConcatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("left operand of trace concatenation must end in •")
    }
}

impl FlTrace {
    /// The trace consisting of a single acceptance.
    pub fn just(final_acc: Acceptance) -> Self {
        FlTrace { cells: Vec::new(), final_acc }
    }

    /// The ubiquitous trace ⟨•⟩.
    pub fn null() -> Self {
        FlTrace::just(Acceptance::Null)
    }

    pub fn new(cells: Vec<AccEventCell>, final_acc: Acceptance) -> Self {
        FlTrace { cells, final_acc }
    }

    /// Prepends a cell.
    pub fn cons(cell: AccEventCell, rest: &FlTrace) -> Self {
        let mut cells = Vec::with_capacity(rest.cells.len() + 1);
        cells.push(cell);
        cells.extend(rest.cells.iter().cloned());
        FlTrace { cells, final_acc: rest.final_acc.clone() }
    }

    pub fn cells(&self) -> &[AccEventCell] {
        &self.cells
    }

    pub fn final_acc(&self) -> &Acceptance {
        &self.final_acc
    }

    /// The number of event cells.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// The prefix order lifted from acceptances: cell events must agree, cell
    /// acceptances may weaken to •, and the final acceptance of the shorter
    /// trace must sit below whatever it stops at in the longer one.
    pub fn prefix_leq(&self, other: &FlTrace) -> bool {
        if self.cells.len() > other.cells.len() {
            return false;
        }
        for (c, d) in self.cells.iter().zip(other.cells.iter()) {
            if c.event() != d.event() || !c.acc().leq(d.acc()) {
                return false;
            }
        }
        let stop = if self.cells.len() == other.cells.len() {
            &other.final_acc
        } else {
            other.cells[self.cells.len()].acc()
        };
        self.final_acc.leq(stop)
    }

    /// Concatenation with the left operand required to end in •.
    pub fn concat_final(&self, rhs: &FlTrace) -> Result<FlTrace, ConcatError> {
        if self.final_acc != Acceptance::Null {
            return Err(ConcatError);
        }
        let mut cells = self.cells.clone();
        cells.extend(rhs.cells.iter().cloned());
        Ok(FlTrace { cells, final_acc: rhs.final_acc.clone() })
    }

    /// Tick-healthiness of a single trace: no acceptance offers tick, and if
    /// tick occurs it is the last event, followed by •.
    pub fn is_fl_tick(&self) -> bool {
        if self.final_acc.contains_tick() {
            return false;
        }
        let n = self.cells.len();
        for (i, c) in self.cells.iter().enumerate() {
            if c.acc().contains_tick() {
                return false;
            }
            if *c.event() == Event::Tick && (i + 1 != n || self.final_acc != Acceptance::Null) {
                return false;
            }
        }
        true
    }

    pub fn contains_tick_event(&self) -> bool {
        self.cells.iter().any(|c| *c.event() == Event::Tick)
    }

    /// The trace truncated to at most `k` event cells; when cells are dropped
    /// the trace stops at the acceptance of the first dropped cell.
    pub fn truncate(&self, k: usize) -> FlTrace {
        if self.cells.len() <= k {
            self.clone()
        } else {
            FlTrace {
                cells: self.cells[..k].to_vec(),
                final_acc: self.cells[k].acc().clone(),
            }
        }
    }
}

impl fmt::Display for FlTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("⟨")?;
        for c in &self.cells {
            write!(f, "({},{}),", c.acc(), c.event())?;
        }
        write!(f, "{}⟩", self.final_acc)
    }
}

/// All tick-healthy traces over the alphabet's universe with at most `k`
/// event cells. This is the denotation of Chaos and the candidate space for
/// the adjoint computations.
pub fn all_fl_tick_traces(alpha: &Alphabet, k: usize) -> BTreeSet<FlTrace> {
    let accs: Vec<Acceptance> = core::iter::once(Acceptance::Null)
        .chain(subsets(&alpha.acceptance_events()).map(Acceptance::Set))
        .collect();
    let mut cells: Vec<AccEventCell> = Vec::new();
    let mut tick_cells: Vec<AccEventCell> = Vec::new();
    for acc in &accs {
        for e in alpha.universe() {
            if let Some(cell) = AccEventCell::new(acc.clone(), e.clone()) {
                if e == Event::Tick {
                    tick_cells.push(cell);
                } else {
                    cells.push(cell);
                }
            }
        }
    }
    // tick-free traces first, built back to front
    let mut out: BTreeSet<FlTrace> = accs.iter().cloned().map(FlTrace::just).collect();
    let mut frontier: Vec<FlTrace> = out.iter().cloned().collect();
    for _ in 0..k {
        let mut next = Vec::new();
        for t in &frontier {
            for c in &cells {
                next.push(FlTrace::cons(c.clone(), t));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    // tick endings: a tick-free trace ending in • may append one tick cell
    let endings: Vec<FlTrace> = out
        .iter()
        .filter(|t| *t.final_acc() == Acceptance::Null && t.len() < k)
        .cloned()
        .collect();
    for t in endings {
        for c in &tick_cells {
            let mut cells2 = t.cells.clone();
            cells2.push(c.clone());
            out.insert(FlTrace::new(cells2, Acceptance::Null));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str) -> Event {
        Event::from_name(s)
    }

    fn aset(names: &[&str]) -> Acceptance {
        Acceptance::set(names.iter().map(|s| ev(s)))
    }

    fn cell(acc: Acceptance, e: &str) -> AccEventCell {
        AccEventCell::new(acc, ev(e)).unwrap()
    }

    #[test]
    fn acc_leq_null_least() {
        assert!(Acceptance::Null.leq(&aset(&["a"])));
        assert!(aset(&["a"]).leq(&aset(&["a"])));
        assert!(!aset(&["a"]).leq(&aset(&["a", "b"])));
    }

    #[test]
    fn cell_invariant() {
        assert!(AccEventCell::new(aset(&["a"]), ev("b")).is_none());
        assert!(AccEventCell::new(Acceptance::Null, ev("b")).is_some());
    }

    #[test]
    fn prefix_examples() {
        // ⟨•⟩ ≤ ⟨{a,b}⟩
        assert!(FlTrace::null().prefix_leq(&FlTrace::just(aset(&["a", "b"]))));
        // ⟨(•,a),•⟩ ≤ ⟨({a,b},a),•⟩
        let lo = FlTrace::new(alloc::vec![cell(Acceptance::Null, "a")], Acceptance::Null);
        let hi = FlTrace::new(alloc::vec![cell(aset(&["a", "b"]), "a")], Acceptance::Null);
        assert!(lo.prefix_leq(&hi));
        assert!(!hi.prefix_leq(&lo));
        // no subset weakening of acceptances
        assert!(!FlTrace::just(aset(&["a"])).prefix_leq(&FlTrace::just(aset(&["a", "b"]))));
    }

    #[test]
    fn concat_final() {
        let empty_null = FlTrace::null();
        assert_eq!(
            empty_null.concat_final(&FlTrace::just(aset(&["a"]))).unwrap(),
            FlTrace::just(aset(&["a"]))
        );
        let lhs = FlTrace::new(alloc::vec![cell(aset(&["a"]), "a")], Acceptance::Null);
        let rhs = FlTrace::new(alloc::vec![cell(Acceptance::Null, "tick")], Acceptance::Null);
        let joined = lhs.concat_final(&rhs).unwrap();
        assert_eq!(joined.len(), 2);
        assert_eq!(*joined.cells()[1].event(), Event::Tick);
        assert_eq!(
            FlTrace::just(aset(&["a"])).concat_final(&FlTrace::null()),
            Err(ConcatError)
        );
    }

    #[test]
    fn fl_tick_examples() {
        let tick_end = FlTrace::new(alloc::vec![cell(Acceptance::Null, "tick")], Acceptance::Null);
        assert!(tick_end.is_fl_tick());
        let tick_in_acc = FlTrace::just(aset(&["tick"]));
        assert!(!tick_in_acc.is_fl_tick());
        let after_tick = FlTrace::new(
            alloc::vec![cell(Acceptance::Null, "tick"), cell(Acceptance::Null, "a")],
            Acceptance::Null,
        );
        assert!(!after_tick.is_fl_tick());
    }

    #[test]
    fn enumeration_small() {
        let alpha = Alphabet::from_names(["a"]);
        let all = all_fl_tick_traces(&alpha, 0);
        // finals: •, {}, {a}, {tock}, {a,tock}
        assert_eq!(all.len(), 5);
        let all1 = all_fl_tick_traces(&alpha, 1);
        assert!(all1.iter().all(|t| t.is_fl_tick() && t.len() <= 1));
        assert!(all1.len() > all.len());
        // every member is tick-healthy
        let all2 = all_fl_tick_traces(&alpha, 2);
        assert!(all2.iter().all(|t| t.is_fl_tick() && t.len() <= 2));
    }
}
