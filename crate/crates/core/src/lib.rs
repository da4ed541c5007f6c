//! Exact engine for the accelerated Collatz map on odd integers, with each
//! value read as a binary polynomial at `x = 2`.

pub mod analysis;
pub mod bitpoly;
pub mod cli;
pub mod collatz;
pub mod error;
pub mod treegraph;
pub mod verify;

pub use bitpoly::BitPoly;
pub use error::{Error, Result};
