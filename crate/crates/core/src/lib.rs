//! Exact analysis of semi-infinite linear programs with countably many
//! constraints.
//!
//! * [`seq`]: rational-tailed sequences with decidable limits and signs.
//! * [`lp`]: exact-rational simplex with checkable certificates.
//! * [`silp`]: instances, truncations, dual constructions and gap reports.
//! * [`witness`]: executable counterexample constructions for positive
//!   functionals on sequence spaces.
//! * [`cli`]: instance files, report rendering and the command-line front end.

pub mod cli;
pub mod lp;
pub mod seq;
pub mod silp;
pub mod witness;

pub use seq::{Rational, RationalSequence};
