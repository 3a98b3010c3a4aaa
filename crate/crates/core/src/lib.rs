//! Construction and verification of normalized tight frame multiwavelets
//! from piecewise-linear spectral data, with exact rational arithmetic.

pub mod arith;
pub mod construction;
pub mod error;
pub mod family_file;
pub mod folding;
pub mod frametest;
pub mod grid;
pub mod report;
pub mod trace;
pub mod verification;

pub use error::{Error, Result};
