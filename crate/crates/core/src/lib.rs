//! Exact classification and evaluation of weighted Eulerian orientation counting problems.

pub mod arith;
pub mod bits;
pub mod classify;
pub mod error;
pub mod grid;
pub mod signature;
pub mod solve;

pub use arith::ExactComplex;
pub use bits::BitString;
pub use error::{Error, Result};
pub use signature::{Pairing, Signature};
