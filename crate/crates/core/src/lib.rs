//! Exact verification toolkit for the genus-2 isogeny class with Weil
//! polynomial `x^4 + (2-2q)x^2 + q^2` over odd `F_q`.
//!
//! The crate computes, independently, the number of principally polarized
//! abelian surfaces in the class (through class groups of orders in the
//! biquadratic CM field `Q(sqrt(-2), sqrt(-D))`) and the number of
//! geometrically split polarized surfaces (through elliptic curves over
//! `F_{q^2}`), and checks that the two agree. Exhaustive point-count searches
//! over small fields confirm the resulting nonexistence statement directly.

pub mod arith;
pub mod biquadratic;
pub mod cache;
pub mod census;
pub mod cli;
pub mod error;
pub mod curves;
pub mod fields;
pub mod quadratic;

pub use error::{Error, Result};
