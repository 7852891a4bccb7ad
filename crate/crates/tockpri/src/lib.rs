//! Std companion to `tockpri-core`: the spec-file parser, canonical JSON
//! reports, and the algebraic-law suites that the CLI and the acceptance
//! tests drive.

pub mod json;
pub mod laws;
pub mod parser;
