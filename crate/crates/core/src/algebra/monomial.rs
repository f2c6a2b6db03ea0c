use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};

/// Upper bound on the number of ring variables, including auxiliary
/// elimination variables.
pub const MAX_VARS: usize = 16;

/// An exponent vector with cached total degree. Unused slots are zero.
#[derive(Clone, Copy)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
    arity: u8,
    degree: u32,
}

impl Monomial {
    pub fn one(arity: usize) -> Self {
        assert!(arity <= MAX_VARS, "arity {} exceeds MAX_VARS", arity);
        Monomial {
            exps: [0; MAX_VARS],
            arity: arity as u8,
            degree: 0,
        }
    }

    pub fn from_exponents(exps: &[u32]) -> Result<Self> {
        if exps.len() > MAX_VARS {
            return Err(AlgebraError::TooManyVariables {
                max: MAX_VARS,
                got: exps.len(),
            });
        }
        let mut m = Monomial::one(exps.len());
        for (i, &e) in exps.iter().enumerate() {
            let e = u16::try_from(e).map_err(|_| AlgebraError::ResourceCap(format!("exponent {} too large", e)))?;
            m.exps[i] = e;
            m.degree += e as u32;
        }
        Ok(m)
    }

    pub fn var(arity: usize, i: usize) -> Self {
        let mut m = Monomial::one(arity);
        assert!(i < arity);
        m.exps[i] = 1;
        m.degree = 1;
        m
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    #[inline]
    pub fn exponents(&self) -> &[u16] {
        &self.exps[..self.arity as usize]
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    /// Bitmask of variables with positive exponent.
    pub fn support(&self) -> u32 {
        let mut mask = 0u32;
        for (i, &e) in self.exponents().iter().enumerate() {
            if e > 0 {
                mask |= 1 << i;
            }
        }
        mask
    }

    fn check(&self, other: &Monomial) -> Result<()> {
        if self.arity != other.arity {
            return Err(AlgebraError::ArityMismatch(self.arity(), other.arity()));
        }
        Ok(())
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.arity, other.arity);
        let mut out = *self;
        for i in 0..self.arity as usize {
            out.exps[i] += other.exps[i];
        }
        out.degree += other.degree;
        out
    }

    pub fn checked_mul(&self, other: &Monomial) -> Result<Monomial> {
        self.check(other)?;
        let mut out = *self;
        for i in 0..self.arity as usize {
            out.exps[i] = self.exps[i]
                .checked_add(other.exps[i])
                .ok_or_else(|| AlgebraError::ResourceCap("exponent overflow".into()))?;
        }
        out.degree += other.degree;
        Ok(out)
    }

    /// Does `self` divide `other`?
    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        debug_assert_eq!(self.arity, other.arity);
        if self.degree > other.degree {
            return false;
        }
        self.exps[..self.arity as usize]
            .iter()
            .zip(&other.exps[..self.arity as usize])
            .all(|(a, b)| a <= b)
    }

    pub fn checked_divides(&self, other: &Monomial) -> Result<bool> {
        self.check(other)?;
        Ok(self.divides(other))
    }

    /// `other / self`, assuming `self` divides `other`.
    #[inline]
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        let mut out = *other;
        for i in 0..self.arity as usize {
            out.exps[i] -= self.exps[i];
        }
        out.degree -= self.degree;
        out
    }

    /// `self / divisor`.
    pub fn quotient(&self, divisor: &Monomial) -> Result<Monomial> {
        self.check(divisor)?;
        if !divisor.divides(self) {
            return Err(AlgebraError::NotDivisible);
        }
        Ok(divisor.quotient_of(self))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.arity, other.arity);
        let mut out = *self;
        let mut degree = 0u32;
        for i in 0..self.arity as usize {
            out.exps[i] = self.exps[i].max(other.exps[i]);
            degree += out.exps[i] as u32;
        }
        out.degree = degree;
        out
    }

    pub fn checked_lcm(&self, other: &Monomial) -> Result<Monomial> {
        self.check(other)?;
        Ok(self.lcm(other))
    }

    pub fn gcd_is_one(&self, other: &Monomial) -> bool {
        self.exponents()
            .iter()
            .zip(other.exponents())
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Embed into a larger ring: the exponents land at `offset..offset + arity`.
    pub fn embed(&self, new_arity: usize, offset: usize) -> Monomial {
        assert!(offset + self.arity() <= new_arity && new_arity <= MAX_VARS);
        let mut out = Monomial::one(new_arity);
        for i in 0..self.arity() {
            out.exps[offset + i] = self.exps[i];
        }
        out.degree = self.degree;
        out
    }

    /// Keep the variables `offset..offset + new_arity`; the others must be zero.
    pub fn restrict(&self, new_arity: usize, offset: usize) -> Option<Monomial> {
        let mut out = Monomial::one(new_arity);
        for i in 0..self.arity() {
            let e = self.exps[i];
            if i >= offset && i < offset + new_arity {
                out.exps[i - offset] = e;
            } else if e != 0 {
                return None;
            }
        }
        out.degree = self.degree;
        Some(out)
    }

    pub fn set_exponent(&mut self, i: usize, e: u16) {
        assert!(i < self.arity());
        self.degree = self.degree - self.exps[i] as u32 + e as u32;
        self.exps[i] = e;
    }

    /// Every monomial of the given arity and total degree, in lex-descending order.
    pub fn all_of_degree(arity: usize, degree: u32) -> Vec<Monomial> {
        fn go(i: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
            if i + 1 == cur.arity() {
                cur.set_exponent(i, left as u16);
                out.push(*cur);
                return;
            }
            for e in (0..=left).rev() {
                cur.set_exponent(i, e as u16);
                go(i + 1, left - e, cur, out);
            }
            cur.set_exponent(i, 0);
        }
        let mut out = Vec::new();
        if arity == 0 {
            if degree == 0 {
                out.push(Monomial::one(0));
            }
            return out;
        }
        let mut cur = Monomial::one(arity);
        go(0, degree, &mut cur, &mut out);
        out
    }
}

impl PartialEq for Monomial {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.exps == other.exps
    }
}

impl Eq for Monomial {}

impl Hash for Monomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.arity.hash(state);
        self.exps[..self.arity as usize].hash(state);
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exponents())
    }
}

/// The monomial orders used by the engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[derive(Default)]
pub enum MonomialOrder {
    #[default]
    DegRevLex,
    Lex,
    /// Degrevlex on the first `k` variables, then degrevlex on the rest;
    /// eliminates the first block.
    BlockElim {
        k: usize,
    },
}

#[inline]
fn revlex_tail(a: &[u16], b: &[u16]) -> Ordering {
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            // the smaller exponent in the last differing slot wins
            return if a[i] < b[i] { Ordering::Greater } else { Ordering::Less };
        }
    }
    Ordering::Equal
}

#[inline]
fn degrevlex(a: &[u16], b: &[u16], da: u32, db: u32) -> Ordering {
    match da.cmp(&db) {
        Ordering::Equal => revlex_tail(a, b),
        o => o,
    }
}

impl MonomialOrder {
    #[inline]
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.arity, b.arity);
        let n = a.arity as usize;
        match *self {
            MonomialOrder::DegRevLex => degrevlex(&a.exps[..n], &b.exps[..n], a.degree, b.degree),
            MonomialOrder::Lex => a.exps[..n].cmp(&b.exps[..n]),
            MonomialOrder::BlockElim { k } => {
                let k = k.min(n);
                let da: u32 = a.exps[..k].iter().map(|&e| e as u32).sum();
                let db: u32 = b.exps[..k].iter().map(|&e| e as u32).sum();
                match degrevlex(&a.exps[..k], &b.exps[..k], da, db) {
                    Ordering::Equal => degrevlex(&a.exps[k..n], &b.exps[k..n], a.degree - da, b.degree - db),
                    o => o,
                }
            }
        }
    }

    pub fn checked_compare(&self, a: &Monomial, b: &Monomial) -> Result<Ordering> {
        a.check(b)?;
        Ok(self.compare(a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e).unwrap()
    }

    #[test]
    fn lcm_and_division() {
        assert_eq!(m(&[2, 1, 0]).lcm(&m(&[0, 1, 2])), m(&[2, 1, 2]));
        assert!(m(&[2, 1, 0]).divides(&m(&[2, 2, 1])));
        assert_eq!(m(&[2, 2, 1]).quotient(&m(&[2, 1, 0])).unwrap(), m(&[0, 1, 1]));
        assert!(!m(&[1, 0]).divides(&m(&[0, 1])));
        assert_eq!(m(&[0, 1]).quotient(&m(&[1, 0])), Err(AlgebraError::NotDivisible));
        assert_eq!(
            m(&[1, 0]).checked_mul(&m(&[1, 0, 0])),
            Err(AlgebraError::ArityMismatch(2, 3))
        );
    }

    #[test]
    fn order_examples() {
        let drl = MonomialOrder::DegRevLex;
        assert_eq!(drl.compare(&m(&[2, 1]), &m(&[1, 2])), Ordering::Greater);
        assert_eq!(
            MonomialOrder::Lex.compare(&m(&[0, 5, 0]), &m(&[1, 0, 0])),
            Ordering::Less
        );
        for ord in [drl, MonomialOrder::Lex, MonomialOrder::BlockElim { k: 1 }] {
            assert_eq!(ord.compare(&m(&[1, 2, 3]), &m(&[1, 2, 3])), Ordering::Equal);
        }
        // x*z vs y^2 in degrevlex: last nonzero of (1,-2,1) is positive, so y^2 wins
        assert_eq!(drl.compare(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
        // block order eliminates t even against high x degree
        let elim = MonomialOrder::BlockElim { k: 1 };
        assert_eq!(elim.compare(&m(&[1, 0, 0]), &m(&[0, 7, 3])), Ordering::Greater);
    }

    fn arb_mono(n: usize) -> impl Strategy<Value = Monomial> {
        proptest::collection::vec(0u32..5, n).prop_map(|v| Monomial::from_exponents(&v).unwrap())
    }

    fn arb_order() -> impl Strategy<Value = MonomialOrder> {
        prop_oneof![
            Just(MonomialOrder::DegRevLex),
            Just(MonomialOrder::Lex),
            (0usize..5).prop_map(|k| MonomialOrder::BlockElim { k }),
        ]
    }

    proptest! {
        #[test]
        fn orders_are_monomial_well_orders(
            ord in arb_order(), a in arb_mono(4), b in arb_mono(4), c in arb_mono(4)
        ) {
            let ab = ord.compare(&a, &b);
            prop_assert_eq!(ab, ord.compare(&b, &a).reverse());
            prop_assert_eq!(ab == Ordering::Equal, a == b);
            if ab == Ordering::Greater && ord.compare(&b, &c) == Ordering::Greater {
                prop_assert_eq!(ord.compare(&a, &c), Ordering::Greater);
            }
            prop_assert_eq!(ord.compare(&a.mul(&c), &b.mul(&c)), ab);
            let one = Monomial::one(4);
            prop_assert_ne!(ord.compare(&a, &one), Ordering::Less);
        }

        #[test]
        fn lcm_is_divisible_by_both(a in arb_mono(3), b in arb_mono(3)) {
            let l = a.lcm(&b);
            prop_assert!(a.divides(&l) && b.divides(&l));
            prop_assert_eq!(a.quotient_of(&l).mul(&a), l);
        }
    }
}
