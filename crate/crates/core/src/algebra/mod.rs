//! Coefficient fields, monomials, monomial orders and sparse polynomials.

pub mod field;
pub mod monomial;
pub mod poly;

pub use field::{Field, FieldKind, PrimeField, Rationals, DEFAULT_PRIME};
pub use monomial::{Monomial, MonomialOrder, MAX_VARS};
pub use poly::{Poly, PolyRing};
