//! Adaptive reduced-rank interpolated FIR receivers for DS-CDMA.
//!
//! The receiver output is `x = w^H D (r * v)` where `v` is a short
//! interpolator, `D` keeps every `L`-th sample and `w` is the reduced-rank
//! filter. Trained (MMSE) and blind (CMV) designs are provided both in batch
//! and adaptive form, together with the analytical MSE models and a
//! simulation harness.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adaptive;
pub mod analysis;
pub mod cmv;
pub mod error;
pub mod harness;
pub mod interp;
pub mod linalg;
pub mod mmse;
pub mod signal;

pub use error::{Error, Result};
