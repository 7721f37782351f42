//! Exact calculator kernel for genus-one, degree-zero orbifold
//! Gromov-Witten invariants of quotient-type targets.
//!
//! The crate evaluates the dilaton, divisor, and twisted invariants by
//! independent routes — integration over the double inertia stack,
//! bicyclic-subgroup decomposition, and torus localization — and checks
//! their agreement as exact rational numbers and polynomial identities.
//! Everything is exact: arbitrary-precision rationals, a cyclotomic
//! quotient ring for character values, and multivariate polynomials in
//! the torus and twist parameters extended by a square-zero psi class.
//!
//! The crate is no_std (alloc only); IO, file formats, and the command
//! line live in the companion crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cyclotomic;
pub mod error;
pub mod group;
pub mod invariants;
pub mod localize;
pub mod poly;
pub mod psi;
pub mod rat;
pub mod rep;

pub use error::{Error, Result};
pub use rat::Rat;
