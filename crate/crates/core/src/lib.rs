//! Entanglement monotones built from semidefinite programs: tempered
//! negativity, PPT robustness and the bounds they give on entanglement cost and
//! distillable entanglement.

// `!(x >= 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::too_many_arguments)]

pub mod error;
pub mod io;
pub mod linalg;
pub mod monotones;
pub mod protocols;
pub mod reproduce;
pub mod sdp;
pub mod states;

pub use error::{Error, Result};
