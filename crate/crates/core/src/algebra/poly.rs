//! Sparse polynomials as term lists sorted strictly descending in the ring's
//! working order.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::field::Field;
use crate::algebra::monomial::{Monomial, MonomialOrder, MAX_VARS};
use crate::error::{AlgebraError, Result};

/// A polynomial; meaningful only together with the [`PolyRing`] that sorted it.
pub struct Poly<F: Field> {
    terms: Vec<(Monomial, F::Elem)>,
}

impl<F: Field> Clone for Poly<F> {
    fn clone(&self) -> Self {
        Poly {
            terms: self.terms.clone(),
        }
    }
}

impl<F: Field> PartialEq for Poly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<F: Field> Eq for Poly<F> {}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.terms.iter()).finish()
    }
}

impl<F: Field> Poly<F> {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, F::Elem)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coefficient(&self) -> Option<&F::Elem> {
        self.terms.first().map(|t| &t.1)
    }

    /// Maximal total degree of a term; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m0, _)) => self.terms.iter().all(|(m, _)| m.degree() == m0.degree()),
        }
    }

    pub fn into_terms(self) -> Vec<(Monomial, F::Elem)> {
        self.terms
    }

    pub(crate) fn from_sorted_unchecked(terms: Vec<(Monomial, F::Elem)>) -> Self {
        Poly { terms }
    }
}

/// The polynomial ring `k[x_1..x_n]` with a fixed working order.
#[derive(Clone, Debug)]
pub struct PolyRing<F: Field> {
    field: F,
    names: Arc<Vec<String>>,
    order: MonomialOrder,
}

impl<F: Field> PartialEq for PolyRing<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.names == other.names && self.order == other.order
    }
}

impl<F: Field> PolyRing<F> {
    pub fn new(field: F, names: Vec<String>, order: MonomialOrder) -> Result<Self> {
        if names.len() > MAX_VARS {
            return Err(AlgebraError::TooManyVariables {
                max: MAX_VARS,
                got: names.len(),
            });
        }
        Ok(PolyRing {
            field,
            names: Arc::new(names),
            order,
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn with_order(&self, order: MonomialOrder) -> Self {
        PolyRing {
            field: self.field.clone(),
            names: self.names.clone(),
            order,
        }
    }

    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.order.compare(a, b)
    }

    pub fn zero(&self) -> Poly<F> {
        Poly::zero()
    }

    pub fn one(&self) -> Poly<F> {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: F::Elem) -> Poly<F> {
        self.term(Monomial::one(self.nvars()), c)
    }

    pub fn var(&self, i: usize) -> Poly<F> {
        self.term(Monomial::var(self.nvars(), i), self.field.one())
    }

    pub fn term(&self, m: Monomial, c: F::Elem) -> Poly<F> {
        if self.field.is_zero(&c) {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Build a canonical polynomial from arbitrary terms (any order, repeats allowed).
    pub fn from_terms(&self, terms: Vec<(Monomial, F::Elem)>) -> Poly<F> {
        let mut acc: HashMap<Monomial, F::Elem> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            debug_assert_eq!(m.arity(), self.nvars());
            match acc.get_mut(&m) {
                Some(v) => *v = self.field.add(v, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut out: Vec<_> = acc.into_iter().filter(|(_, c)| !self.field.is_zero(c)).collect();
        out.sort_by(|a, b| self.cmp(&b.0, &a.0));
        Poly { terms: out }
    }

    /// Re-sort a polynomial (built under another order of the same arity).
    pub fn resort(&self, p: &Poly<F>) -> Poly<F> {
        let mut terms = p.terms.clone();
        terms.sort_by(|a, b| self.cmp(&b.0, &a.0));
        Poly { terms }
    }

    pub fn leading_term<'a>(&self, p: &'a Poly<F>) -> Option<(&'a Monomial, &'a F::Elem)> {
        p.terms.first().map(|(m, c)| (m, c))
    }

    pub fn add(&self, a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
        self.combine(a, b, false)
    }

    pub fn sub(&self, a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
        self.combine(a, b, true)
    }

    fn combine(&self, a: &Poly<F>, b: &Poly<F>, negate_b: bool) -> Poly<F> {
        let f = &self.field;
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() && j < b.terms.len() {
            let (ma, ca) = &a.terms[i];
            let (mb, cb) = &b.terms[j];
            match self.cmp(ma, mb) {
                Ordering::Greater => {
                    out.push((*ma, ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((*mb, if negate_b { f.neg(cb) } else { cb.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_b { f.sub(ca, cb) } else { f.add(ca, cb) };
                    if !f.is_zero(&c) {
                        out.push((*ma, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a.terms[i..].iter().cloned());
        for (m, c) in &b.terms[j..] {
            out.push((*m, if negate_b { f.neg(c) } else { c.clone() }));
        }
        Poly { terms: out }
    }

    pub fn neg(&self, a: &Poly<F>) -> Poly<F> {
        Poly {
            terms: a.terms.iter().map(|(m, c)| (*m, self.field.neg(c))).collect(),
        }
    }

    pub fn scale(&self, a: &Poly<F>, c: &F::Elem) -> Poly<F> {
        if self.field.is_zero(c) {
            return Poly::zero();
        }
        Poly {
            terms: a.terms.iter().map(|(m, x)| (*m, self.field.mul(x, c))).collect(),
        }
    }

    /// `c * m * a`; monomial multiplication preserves the order.
    pub fn mul_term(&self, a: &Poly<F>, m: &Monomial, c: &F::Elem) -> Poly<F> {
        if self.field.is_zero(c) {
            return Poly::zero();
        }
        Poly {
            terms: a.terms.iter().map(|(x, y)| (x.mul(m), self.field.mul(y, c))).collect(),
        }
    }

    /// `a - c * m * b` in one merge pass.
    pub fn sub_mul_term(&self, a: &Poly<F>, c: &F::Elem, m: &Monomial, b: &Poly<F>) -> Poly<F> {
        let f = &self.field;
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() && j < b.terms.len() {
            let (ma, ca) = &a.terms[i];
            let mb = b.terms[j].0.mul(m);
            match self.cmp(ma, &mb) {
                Ordering::Greater => {
                    out.push((*ma, ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb, f.neg(&f.mul(c, &b.terms[j].1))));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = f.sub(ca, &f.mul(c, &b.terms[j].1));
                    if !f.is_zero(&v) {
                        out.push((*ma, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a.terms[i..].iter().cloned());
        for (mb, cb) in &b.terms[j..] {
            out.push((mb.mul(m), f.neg(&f.mul(c, cb))));
        }
        Poly { terms: out }
    }

    pub fn mul(&self, a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        let mut acc = Poly::zero();
        for (m, c) in &small.terms {
            let neg_c = self.field.neg(c);
            acc = self.sub_mul_term(&acc, &neg_c, m, large);
        }
        acc
    }

    pub fn pow(&self, a: &Poly<F>, e: u32) -> Poly<F> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn monic(&self, a: &Poly<F>) -> Poly<F> {
        match a.leading_coefficient() {
            None => Poly::zero(),
            Some(lc) if self.field.is_one(lc) => a.clone(),
            Some(lc) => {
                let inv = self.field.inv(lc).expect("leading coefficient is nonzero");
                self.scale(a, &inv)
            }
        }
    }

    /// Exact quotient `a / b`; fails unless `b` divides `a`.
    pub fn exact_div(&self, a: &Poly<F>, b: &Poly<F>) -> Result<Poly<F>> {
        let (lm_b, lc_b) = self.leading_term(b).ok_or(AlgebraError::ZeroPolynomial)?;
        let inv = self.field.inv(lc_b)?;
        let mut rem = a.clone();
        let mut quot = Vec::new();
        while let Some((lm, lc)) = rem.terms.first().cloned() {
            if !lm_b.divides(&lm) {
                return Err(AlgebraError::NotDivisible);
            }
            let m = lm_b.quotient_of(&lm);
            let c = self.field.mul(&lc, &inv);
            rem = self.sub_mul_term(&rem, &c, &m, b);
            quot.push((m, c));
        }
        Ok(Poly { terms: quot })
    }

    /// Map a polynomial from `from` into this ring, placing the variables at
    /// `offset..offset + from.nvars()`.
    pub fn embed(&self, p: &Poly<F>, offset: usize) -> Poly<F> {
        let terms = p
            .terms
            .iter()
            .map(|(m, c)| (m.embed(self.nvars(), offset), c.clone()))
            .collect::<Vec<_>>();
        let mut out = Poly { terms };
        out.terms.sort_by(|a, b| self.cmp(&b.0, &a.0));
        out
    }

    /// Inverse of [`embed`](Self::embed); `None` if a term involves a dropped variable.
    pub fn restrict(&self, p: &Poly<F>, offset: usize) -> Option<Poly<F>> {
        let mut terms = Vec::with_capacity(p.len());
        for (m, c) in &p.terms {
            terms.push((m.restrict(self.nvars(), offset)?, c.clone()));
        }
        terms.sort_by(|a, b| self.cmp(&b.0, &a.0));
        Some(Poly { terms })
    }

    /// Substitute `images[i]` for variable `i` of the source ring (whose
    /// polynomials have arity `images.len()`).
    pub fn substitute(&self, p: &Poly<F>, images: &[Poly<F>]) -> Poly<F> {
        let mut acc = Poly::zero();
        for (m, c) in &p.terms {
            let mut t = self.constant(c.clone());
            for (i, img) in images.iter().enumerate() {
                let e = m.exponent(i);
                if e > 0 {
                    t = self.mul(&t, &self.pow(img, e));
                }
            }
            acc = self.add(&acc, &t);
        }
        acc
    }

    /// A form of the given degree whose coefficients are independent random
    /// field elements (every monomial of that degree may appear).
    pub fn random_form<R: rand::Rng + ?Sized>(&self, degree: u32, rng: &mut R) -> Poly<F> {
        let terms = Monomial::all_of_degree(self.nvars(), degree)
            .into_iter()
            .map(|m| (m, self.field.random(rng)))
            .collect();
        self.from_terms(terms)
    }

    /// A random linear combination of `polys`.
    pub fn random_combination<R: rand::Rng + ?Sized>(&self, polys: &[Poly<F>], rng: &mut R) -> Poly<F> {
        let mut acc = Poly::zero();
        for p in polys {
            let c = self.field.random(rng);
            acc = self.add(&acc, &self.scale(p, &c));
        }
        acc
    }

    pub fn format(&self, p: &Poly<F>) -> String {
        format_terms(p.terms.iter().map(|(m, c)| (m, self.field.lift(c))), &self.names)
    }
}

/// Render `c*x^a*y^b` style text; shared with the field-agnostic DSL printer.
pub(crate) fn format_terms<'a, I>(terms: I, names: &[String]) -> String
where
    I: Iterator<Item = (&'a Monomial, num_rational::BigRational)>,
{
    use num_traits::{One, Signed};
    let mut out = String::new();
    for (idx, (m, c)) in terms.enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push(if neg { '-' } else { '+' });
        }
        let mut factors: Vec<String> = Vec::new();
        if !abs.is_one() || m.is_one() {
            factors.push(crate::algebra::field::format_rational(&abs));
        }
        for (i, &e) in m.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(names[i].clone()),
                _ => factors.push(format!("{}^{}", names[i], e)),
            }
        }
        out.push_str(&factors.join("*"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
