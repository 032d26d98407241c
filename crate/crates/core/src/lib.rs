//! Exact pp-divisors and fansy divisors over rational polyhedra.

pub mod arith;
pub mod chow;
pub mod divisor;
pub mod error;
pub mod grassmannian;
pub mod json;
pub mod lattice;
pub mod polyhedral;

pub use error::{Error, Result};
