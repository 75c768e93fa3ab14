//! Extended incomplete gamma functions, Pochhammer symbols and
//! hypergeometric series with a built-in identity checker.

// `!(a > b)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod classical;
pub mod error;
pub mod frac;
pub mod gamma;
pub mod genfun;
pub mod hyp;
pub mod pochhammer;
pub mod quad;
pub mod report;
pub mod reps;
pub mod suite;

pub use error::{Error, Result};
