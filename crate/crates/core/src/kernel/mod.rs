//! Exact arithmetic for ℤ₂-graded, ℤ-weighted supercommutative polynomial
//! algebras, with graded derivations and substitution.

mod chart;
mod derivation;
mod monomial;
mod parity;
mod poly;
mod substitution;

pub use chart::{Chart, VarKind, Variable};
pub use derivation::{euler_field, Derivation};
pub use monomial::Monomial;
pub use parity::{Degree, Parity};
pub use poly::{rat, ratio, Poly, Rational};
pub use substitution::Substitution;
