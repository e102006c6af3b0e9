//! Orders of reductions of algebraic numbers modulo primes.

pub mod arith;
pub mod census;
pub mod error;
pub mod gf;
pub mod linrec;
pub mod order;
pub mod reduction;
pub mod selftest;

pub use error::{Error, Result};
