//! Symbolic exterior calculus and numerical verification of Engel, even-contact
//! and contact structures on coordinate charts.

// Negated comparisons such as `!(v >= t)` are deliberate: they treat NaN as
// a failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calculus;
pub mod error;
pub mod expr;
pub mod extension;
pub mod fixtures;
pub mod invariants;
pub mod manifest;
pub mod numeric;
pub mod prolongation;
pub mod runner;
pub mod structures;
pub mod tolerance;

pub use error::{Error, Result};
