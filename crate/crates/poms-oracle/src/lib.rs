//! Independent correctness machinery for constraint based tiling generation:
//! a naive remove-until-fixpoint propagator, an exhaustive backtracking
//! enumerator for tiny grids and a realization verifier.
//!
//! Everything here is deliberately implemented from the rule relation alone,
//! with no support counters or incremental bookkeeping, so that it can serve
//! as ground truth for the optimized solver stack. This crate must never
//! depend on the solver crates.

mod enumerate;
mod fixpoint;
mod verify;

pub use enumerate::{enumerate_realizations, EnumerateError, ENUMERATION_GUARD};
pub use fixpoint::{naive_fixpoint, naive_fixpoint_ordered, FixpointOutcome};
pub use verify::{verify_realization, VerifyReport, Violation};
