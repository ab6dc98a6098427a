//! Exact-arithmetic tools for KS-uncolourable contextuality scenarios.
//!
//! The pipeline: build a graph, map it to a contextuality scenario with
//! [`two_reg::two_reg`], decide KS-colourability, enumerate the extremal
//! probabilistic models, identify (irreducible) minimally indeterministic
//! sets of contexts, and emit noise-robust noncontextuality inequalities
//! `Corr_q <= beta` with exact rational bounds.

pub mod colourability;
pub mod dot;
pub mod error;
pub mod extremal;
pub mod graphs;
pub mod lp;
pub mod misc;
pub mod rational;
pub mod report;
pub mod scenario;
pub mod two_reg;
pub mod witness;

pub use error::{Error, Result};
pub use rational::Rat;

/// Default work budget for the exponential enumerations. Each unit is one
/// search-tree expansion or candidate subset.
pub const DEFAULT_BUDGET: u64 = 50_000_000;
