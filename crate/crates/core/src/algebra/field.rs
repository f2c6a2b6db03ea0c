//! Exact coefficient fields.
//!
//! Polynomials never store their field; every arithmetic call goes through a
//! [`Field`] value, so the prime modulus can be chosen at run time while the
//! element type stays a plain `u32`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;

/// Default characteristic for randomized computations.
pub const DEFAULT_PRIME: u32 = 32003;

pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, AlgebraError>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, AlgebraError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Image of a rational number; fails when the denominator vanishes in the field.
    #[allow(clippy::wrong_self_convention)]
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem, AlgebraError>;

    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_rational(&BigRational::from_integer(BigInt::from(n)))
            .expect("integers embed in every field")
    }

    /// A canonical integer/rational lift, used for printing and for echoing
    /// field-agnostic documents. Prime-field residues lift to the symmetric range.
    fn lift(&self, a: &Self::Elem) -> BigRational;

    /// A uniformly chosen element for generic-position arguments.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn kind(&self) -> FieldKind;

    fn format(&self, a: &Self::Elem) -> String {
        format_rational(&self.lift(a))
    }
}

/// Runtime selector for the coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldKind {
    Rationals,
    Prime { p: u32 },
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rationals => write!(f, "QQ"),
            FieldKind::Prime { p } => write!(f, "F{}", p),
        }
    }
}

impl std::str::FromStr for FieldKind {
    type Err = String;

    /// `QQ` or `F<p>` for a prime `p < 2^31`.
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "QQ" {
            return Ok(FieldKind::Rationals);
        }
        match s.strip_prefix('F') {
            Some(d) if !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()) => {
                let p: u32 = d.parse().map_err(|_| "prime too large".to_string())?;
                PrimeField::new(p).map_err(|_| format!("{} is not a prime below 2^31", p))?;
                Ok(FieldKind::Prime { p })
            }
            _ => Err(format!("unknown field `{}` (expected QQ or F<prime>)", s)),
        }
    }
}

pub(crate) fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// The prime field Z/pZ with `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, AlgebraError> {
        if !(2..(1 << 31)).contains(&p) || !is_prime(p) {
            return Err(AlgebraError::Hypothesis(format!("{} is not a prime below 2^31", p)));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    fn reduce_big(&self, n: &BigInt) -> u32 {
        let r = n.mod_floor(&BigInt::from(self.p));
        r.to_u32().expect("residue fits in u32")
    }

    fn pow(&self, base: u32, mut e: u64) -> u32 {
        let p = self.p as u64;
        let mut acc: u64 = 1;
        let mut b = base as u64 % p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc as u32
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u32;

    #[inline]
    fn zero(&self) -> u32 {
        0
    }
    #[inline]
    fn one(&self) -> u32 {
        1
    }
    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    #[inline]
    fn is_one(&self, a: &u32) -> bool {
        *a == 1
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a + *b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u32) -> Result<u32, AlgebraError> {
        if *a == 0 {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self.pow(*a, self.p as u64 - 2))
    }
    fn from_rational(&self, q: &BigRational) -> Result<u32, AlgebraError> {
        let num = self.reduce_big(q.numer());
        let den = self.reduce_big(q.denom());
        self.div(&num, &den)
    }
    fn from_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }
    fn lift(&self, a: &u32) -> BigRational {
        let v = if *a > self.p / 2 {
            *a as i64 - self.p as i64
        } else {
            *a as i64
        };
        BigRational::from_integer(BigInt::from(v))
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.p)
    }
    fn kind(&self) -> FieldKind {
        FieldKind::Prime { p: self.p }
    }
}

/// The rational numbers with arbitrary-precision numerator and denominator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

/// Random rationals are drawn as integers in `[-RANDOM_RANGE, RANDOM_RANGE]`.
const RANDOM_RANGE: i64 = 97;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Result<BigRational, AlgebraError> {
        if a.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(a.recip())
    }
    fn from_rational(&self, q: &BigRational) -> Result<BigRational, AlgebraError> {
        Ok(q.clone())
    }
    fn lift(&self, a: &BigRational) -> BigRational {
        a.clone()
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        BigRational::from_integer(BigInt::from(rng.gen_range(-RANDOM_RANGE..=RANDOM_RANGE)))
    }
    fn kind(&self) -> FieldKind {
        FieldKind::Rationals
    }
}

/// Reduce a rational to lowest terms with a positive denominator.
pub fn canonical_rational(num: BigInt, den: BigInt) -> Result<BigRational, AlgebraError> {
    if den.is_zero() {
        return Err(AlgebraError::DivisionByZero);
    }
    let r = BigRational::new(num, den);
    debug_assert!(r.denom().is_positive());
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        canonical_rational(BigInt::from(n), BigInt::from(d)).unwrap()
    }

    #[test]
    fn rational_normalizes() {
        let r = q(2, 4);
        assert_eq!(r.numer(), &BigInt::from(1));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(q(3, -6), q(-1, 2));
    }

    #[test]
    fn modular_wraparound() {
        let f = PrimeField::default();
        assert_eq!(f.add(&32002, &1), 0);
        assert_eq!(f.neg(&1), 32002);
        assert_eq!(f.lift(&32002), q(-1, 1));
    }

    #[test]
    fn rational_inverse() {
        let f = Rationals;
        let third = q(1, 3);
        assert_eq!(f.mul(&third, &q(3, 1)), f.one());
        assert_eq!(f.div(&q(1, 1), &third).unwrap(), q(3, 1));
    }

    #[test]
    fn division_by_zero_rejected() {
        assert!(matches!(
            Rationals.inv(&BigRational::zero()),
            Err(AlgebraError::DivisionByZero)
        ));
        assert!(matches!(
            PrimeField::default().div(&3, &0),
            Err(AlgebraError::DivisionByZero)
        ));
        assert!(canonical_rational(BigInt::from(1), BigInt::from(0)).is_err());
    }

    #[test]
    fn prime_inverse_and_embedding() {
        let f = PrimeField::new(101).unwrap();
        for a in 1..101u32 {
            assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
        }
        assert_eq!(f.from_rational(&q(1, 2)).unwrap(), 51);
        assert!(f.from_rational(&q(1, 101)).is_err());
        assert!(PrimeField::new(100).is_err());
    }
}
