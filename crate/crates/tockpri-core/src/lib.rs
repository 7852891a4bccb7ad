//! Trace-set semantics for a small timed process language: the finite-linear
//! model with `tick` and `tock` as ordinary events, the tick-tock model, the
//! prioritisation operators of both, and the maps between them.
//!
//! Everything in this crate is a pure function over immutable values, so the
//! crate is `no_std` (with `alloc`); IO, parsing and serialization live in the
//! companion `tockpri` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod event;
pub mod order;
pub mod fl_trace;
pub mod tt_trace;
pub mod process;
pub mod fl;
pub mod fl_pri;
pub mod tt;
pub mod galois;
pub mod tt_pri;

pub use event::{Alphabet, Event};
pub use fl_trace::{AccEventCell, Acceptance, FlTrace};
pub use order::PriorityOrder;
pub use tt_trace::{TtObs, TtTrace};
