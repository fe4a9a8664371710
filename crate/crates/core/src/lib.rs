//! Permutationally invariant two-body Bell inequalities, their violation by
//! collective spin measurements on symmetric states, and the entanglement
//! toolkit around them.

// `!(x > 0.0)` is used on purpose so that NaN fails the check too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chains;
pub mod collective;
pub mod correlations;
pub mod error;
pub mod numerics;
pub mod quantum;
pub mod symmetric;

pub use error::{Error, Result};
