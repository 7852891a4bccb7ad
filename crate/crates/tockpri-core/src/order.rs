//! Strict partial orders on events, used to drive prioritisation.

use alloc::collections::BTreeSet;
use core::fmt;

use crate::event::Event;

/// A strict partial order on events, stored as the transitive closure of the
/// declared pairs. `(a, b)` means `a < b`: `b` has strictly higher priority.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct PriorityOrder {
    pairs: BTreeSet<(Event, Event)>,
}

/// The declared pairs contain a cycle, so no strict order exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleError {
    pub on: Event,
}

impl fmt::Display for CycleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "priority order contains a cycle through `{}`", self.on)
    }
}

impl PriorityOrder {
    /// The empty order: every event is maximal.
    pub fn empty() -> Self {
        PriorityOrder::default()
    }

    /// Closes the declared pairs under transitivity and rejects cycles.
    pub fn new<I: IntoIterator<Item = (Event, Event)>>(declared: I) -> Result<Self, CycleError> {
        let mut pairs: BTreeSet<(Event, Event)> = declared.into_iter().collect();
        loop {
            let mut added = BTreeSet::new();
            for (a, b) in &pairs {
                for (c, d) in &pairs {
                    if b == c && !pairs.contains(&(a.clone(), d.clone())) {
                        added.insert((a.clone(), d.clone()));
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            pairs.extend(added);
        }
        if let Some((a, _)) = pairs.iter().find(|(a, b)| a == b) {
            return Err(CycleError { on: a.clone() });
        }
        Ok(PriorityOrder { pairs })
    }

    pub fn pairs(&self) -> &BTreeSet<(Event, Event)> {
        &self.pairs
    }

    /// `a < b` in the order.
    pub fn lt(&self, a: &Event, b: &Event) -> bool {
        self.pairs.contains(&(a.clone(), b.clone()))
    }

    /// No event is strictly above `e`.
    pub fn is_maximal(&self, e: &Event) -> bool {
        !self.pairs.iter().any(|(a, _)| a == e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str) -> Event {
        Event::from_name(s)
    }

    #[test]
    fn already_closed() {
        let p = PriorityOrder::new([(ev("a"), ev("b"))]).unwrap();
        assert_eq!(p.pairs().len(), 1);
        assert!(p.lt(&ev("a"), &ev("b")));
    }

    #[test]
    fn transitive_closure() {
        let p = PriorityOrder::new([(ev("a"), ev("b")), (ev("b"), ev("c"))]).unwrap();
        assert_eq!(p.pairs().len(), 3);
        assert!(p.lt(&ev("a"), &ev("c")));
    }

    #[test]
    fn cycle_rejected() {
        let err = PriorityOrder::new([(ev("a"), ev("b")), (ev("b"), ev("a"))]).unwrap_err();
        assert!(err.on == ev("a") || err.on == ev("b"));
    }

    #[test]
    fn maximality() {
        let p = PriorityOrder::new([(ev("a"), ev("b"))]).unwrap();
        assert!(p.is_maximal(&ev("b")));
        assert!(!p.is_maximal(&ev("a")));
        // tock is maximal unless the order says otherwise
        assert!(p.is_maximal(&Event::Tock));
    }
}
