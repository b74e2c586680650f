//! Greedy low-discrepancy sequences on the torus.
//!
//! Given a prefix `x_1, ..., x_{N-1}`, the next point minimizes a periodic
//! pair energy such as `sum_k (1 - ln(2 sin(pi |x - x_k|)))`. The crate
//! provides the kernels, the greedy builder, exact star discrepancy in
//! one to three dimensions, classical comparison sets and per-step
//! diagnostics.

pub mod baselines;
pub mod diagnostics;
pub mod discrepancy;
pub mod error;
pub mod greedy;
pub mod kernels;
pub mod point_set;
mod search;
pub mod weyl;

pub use error::{Error, Result};
pub use point_set::{PointSet, Provenance};
