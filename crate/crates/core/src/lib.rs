//! Green base-station deployment planning.
//!
//! Minimises total network power `N_b (ε₁ P_t + ε₂)` over square and circular fields
//! subject to a farthest-UE coverage target, using exact distance distributions of
//! uniformly dropped users and a Monte Carlo oracle for validation.

// `!(x > 0.0)` rejects NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod coverage;
pub mod deployment;
pub mod distributions;
pub mod error;
pub mod geometry;
pub mod optimizer;
pub mod oracle;
pub mod quadrature;
pub mod units;

pub use error::{Error, Result};
