//! Exact symbolic verification of odd Jacobi structures, quasi Q-manifolds
//! and Jacobi algebroids over ℤ₂-graded, ℤ-weighted polynomial algebras.

pub mod algebroids;
pub mod brackets;
pub mod error;
pub mod expr;
pub mod kernel;
pub mod phase;
pub mod random;
pub mod report;

pub use error::{Error, Result};
