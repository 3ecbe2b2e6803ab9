//! Support-problem conditions for rational points on products of the
//! multiplicative group and elliptic curves over the rationals.
//!
//! Points are reduced modulo primes, their orders computed exactly, and
//! the divisibility conditions relating two points checked over prime
//! ranges. Relations `phi(P) = c Q` are found exactly on tori and by
//! bounded search on elliptic factors.

pub mod arith;
pub mod cli;
pub mod conditions;
pub mod ec;
pub mod error;
pub mod gallery;
pub mod gm;

pub use error::{Error, Result};
