//! Exact computational commutative algebra for fiber cones of m-primary ideals:
//! Gröbner bases, ideal arithmetic, Ratliff-Rush closures with respect to an
//! ideal, reduction numbers, Hilbert coefficients, and depth probes.

pub mod algebra;
pub mod error;
pub mod fibercone;
pub mod groebner;
pub mod ideals;
pub mod invariants;
pub mod io;

pub use error::{AlgebraError, Result};
