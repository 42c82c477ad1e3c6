//! Asymptotically Horowitz–Myers metrics on `ℝ² × T^{n−2}`: scalar
//! curvature, conformal boundary data and total energy, the radial gauge
//! that puts `g_rr` in exact HM form, and a numerical check of the
//! positive-energy inequality with its equality case.

// Negated float comparisons are used deliberately so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod check;
pub mod curvature;
pub mod error;
pub mod gauge;
pub mod metric;
pub mod numerics;
pub mod verifier;

pub use error::{Error, Result};
