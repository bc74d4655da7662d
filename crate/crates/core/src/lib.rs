//! Numerical certification of three explicit constructions from planar and
//! symplectic dynamics:
//!
//! - a pair of analytic diffeomorphisms `R`, `S` of the closed annulus
//!   `1 <= x^2 + y^2 <= 25` that both have the intersection property while
//!   `RS` does not ([`annulus`]);
//! - a non-Lagrangian torus in `T*T^n` displaced by almost every rotation and
//!   disjoint from the torus `{p = p0}` ([`torus`]);
//! - the linear family and two quadratic families `x' = f`, `y' = mu g` on the
//!   closed upper half-plane whose phase portraits change type at `mu = 1`
//!   ([`planar`]).
//!
//! The crate is `no_std` and only needs `alloc`. Elementary functions come
//! from `libm`. IO, file formats and the CLI live in the `dynex` crate.

#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` style guards are used on purpose: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod annulus;
pub mod error;
pub mod geometry;
pub mod ode;
pub mod planar;
pub mod report;
pub mod roots;
pub mod torus;

pub use error::{Error, Result};
pub use report::{CheckReport, Status};
