//! Computational Hodge theory: Deligne bigradings and splittings of mixed
//! Hodge structures, signed heights of oriented structures, generalized
//! biextensions, the Bloch–Wigner dilogarithm, limit mixed Hodge structures
//! of nilpotent orbits and heights along local variations.
//!
//! All algorithms are generic over the real scalar type (see [`real::Real`]):
//! `f64` for 53-bit work and [`real::DoubleDouble`] for 106-bit work.

pub mod biextension;
pub mod dd;
pub mod dilog;
pub mod error;
pub mod height;
pub mod limits;
pub mod linalg;
pub mod mhs;
pub mod random;
pub mod real;
pub mod scenarios;
pub mod schema;
pub mod splitting;
pub mod variations;

pub use error::{HodgeError, Result};
