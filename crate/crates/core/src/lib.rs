//! Partial sums and partial maxima of heavy-tailed moving averages.
//!
//! The crate simulates moving averages with random coefficients driven by
//! regularly varying innovations, builds the partial-sum and partial-maximum
//! paths, samples the stable Lévy / extremal limit pair from a marked Poisson
//! point set, and measures the gap between paths with exactly computed
//! Skorokhod M2-type distances. A Monte Carlo harness ties these together.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cadlag;
pub mod error;
pub mod harness;
pub mod innovations;
pub mod limit;
pub mod linear;
pub mod rng;
pub mod stats;
pub mod tail;

pub use error::{Error, Result};
