// NaN-aware guards read as `!(x > 0.0)` throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod index;
pub mod limits;
pub mod moebius;
pub mod projlin;
pub mod sample;
pub mod verify;
pub mod veronese;

pub use error::{Error, Result};
