//! Exact and high-precision computational core for finite-dimensional
//! nilpotent antiassociative algebras.
//!
//! The crate is `no_std` and only needs `alloc`. Everything that touches the
//! filesystem, serialization or the command line lives in the companion
//! `antiassoc` crate.

#![no_std]
// Structure-constant code indexes several tensors with the same loop variables.
#![allow(clippy::needless_range_loop)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod algebra;
pub mod cohomology;
pub mod degeneration;
pub mod field;
pub mod linalg;
pub mod scalars;

pub use algebra::{Algebra, Param};
pub use field::Field;
pub use scalars::{BigComplex, Cyclo12, Expr, Poly, RatFun, Rational, Value, Vars};
