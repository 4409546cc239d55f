//! High-rank zeta functions over Q from Weyl-group periods, with rank-2
//! cross-checks through Epstein series, lattice geometry and truncation
//! combinatorics.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod cli;
pub mod eisenstein;
pub mod error;
pub mod exact;
pub mod lattice;
pub mod periods;
pub mod presets;
pub mod rootdata;
pub mod specfun;
pub mod truncomb;
pub mod util;

pub use error::{Error, Result};
