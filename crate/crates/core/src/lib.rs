//! Exact computations for unilateral and 2-variable weighted shifts.

pub mod error;
pub mod exact;
pub mod measures;
pub mod shift1d;
pub mod shift2d;
pub mod embed;

pub use error::{Error, Result};
