//! Twisted conjugacy classes and Reidemeister numbers in integer matrix
//! groups and their finite congruence quotients.
//!
//! The crate enumerates SL(n, Z/m), GL(n, Z/m), and Sp(2n, Z/m) explicitly,
//! partitions them into phi-twisted conjugacy classes for a validated
//! automorphism phi, certifies distinctness of integral witness classes
//! through those quotients, and checks fiber bounds along extensions.

pub mod error;
pub mod matrix;
pub mod sampling;
pub mod unionfind;

pub mod automorphism;
pub mod extension;
pub mod groups;
pub mod orbits;
pub mod suites;
pub mod witness;

pub use error::{Error, Result};
pub use matrix::{IntMatrix, ModMatrix, SquareMatrix};
