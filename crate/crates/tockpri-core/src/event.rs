//! Events and alphabets.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use core::fmt;

/// A single interaction symbol. `Tick` signals termination and `Tock` marks
/// the passage of one time unit; both are distinct from every symbol of the
/// declared alphabet.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Event {
    /// A symbol drawn from the declared alphabet.
    Sym(String),
    /// Termination.
    Tick,
    /// Passage of one discrete time unit.
    Tock,
}

impl Event {
    pub fn sym(name: &str) -> Self {
        debug_assert!(name != "tick" && name != "tock");
        Event::Sym(name.to_string())
    }

    pub fn name(&self) -> &str {
        match self {
            Event::Sym(s) => s,
            Event::Tick => "tick",
            Event::Tock => "tock",
        }
    }

    /// Parses an event name, honouring the reserved spellings.
    pub fn from_name(name: &str) -> Self {
        match name {
            "tick" => Event::Tick,
            "tock" => Event::Tock,
            other => Event::Sym(other.to_string()),
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A declared finite alphabet. The full event universe is the alphabet
/// together with `tick` and `tock`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Alphabet {
    sigma: BTreeSet<Event>,
}

impl Alphabet {
    /// Builds an alphabet from plain symbols. `tick` and `tock` are never
    /// members of the alphabet itself.
    pub fn new<I: IntoIterator<Item = Event>>(events: I) -> Self {
        let sigma = events
            .into_iter()
            .filter(|e| matches!(e, Event::Sym(_)))
            .collect();
        Alphabet { sigma }
    }

    pub fn from_names<'a, I: IntoIterator<Item = &'a str>>(names: I) -> Self {
        Self::new(names.into_iter().map(Event::from_name))
    }

    pub fn sigma(&self) -> &BTreeSet<Event> {
        &self.sigma
    }

    pub fn contains_sym(&self, e: &Event) -> bool {
        self.sigma.contains(e)
    }

    /// The full universe: alphabet plus `tick` and `tock`.
    pub fn universe(&self) -> BTreeSet<Event> {
        let mut u = self.sigma.clone();
        u.insert(Event::Tick);
        u.insert(Event::Tock);
        u
    }

    /// Events that may occur in an acceptance of a tick-healthy trace:
    /// alphabet plus `tock`, but never `tick`.
    pub fn acceptance_events(&self) -> BTreeSet<Event> {
        let mut u = self.sigma.clone();
        u.insert(Event::Tock);
        u
    }

    pub fn complement(&self, set: &BTreeSet<Event>) -> BTreeSet<Event> {
        self.universe().difference(set).cloned().collect()
    }
}

/// All subsets of `base`, in a deterministic order.
pub fn subsets(base: &BTreeSet<Event>) -> impl Iterator<Item = BTreeSet<Event>> {
    let items: alloc::vec::Vec<Event> = base.iter().cloned().collect();
    let n = items.len();
    debug_assert!(n < 20);
    (0u32..(1u32 << n)).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, e)| e.clone())
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reserved_spellings() {
        assert_eq!(Event::from_name("tick"), Event::Tick);
        assert_eq!(Event::from_name("tock"), Event::Tock);
        assert_eq!(Event::from_name("a"), Event::sym("a"));
    }

    #[test]
    fn universe_includes_tick_and_tock() {
        let alpha = Alphabet::from_names(["a", "b"]);
        let u = alpha.universe();
        assert_eq!(u.len(), 4);
        assert!(u.contains(&Event::Tick));
        assert!(u.contains(&Event::Tock));
    }

    #[test]
    fn subsets_count() {
        let alpha = Alphabet::from_names(["a", "b"]);
        assert_eq!(subsets(&alpha.universe()).count(), 16);
    }
}
