use std::fmt;
use std::sync::Arc;

use crate::algebra::{Field, FieldKind, Monomial, MonomialOrder, Poly, PolyRing, MAX_VARS};
use crate::error::{AlgebraError, Result};
use crate::groebner::{groebner_basis, GbConfig};

/// The ambient ring `k[x_1..x_n] / (relations)` with the relations a
/// homogeneous regular sequence. Shared by every ideal built over it.
pub struct RingContext<F: Field> {
    ring: PolyRing<F>,
    relations: Vec<Poly<F>>,
    relation_basis: Vec<Poly<F>>,
    dim: usize,
    gb_config: GbConfig,
}

impl<F: Field> fmt::Debug for RingContext<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.field().kind(), self.ring.names().join(","))?;
        if !self.relations.is_empty() {
            let rels: Vec<String> = self.relations.iter().map(|r| self.ring.format(r)).collect();
            write!(f, "/({})", rels.join(", "))?;
        }
        Ok(())
    }
}

impl<F: Field> RingContext<F> {
    pub fn new(field: F, names: Vec<String>, relations: Vec<Poly<F>>) -> Result<Arc<Self>> {
        Self::with_config(field, names, relations, GbConfig::default())
    }

    /// A polynomial ring (no relations).
    pub fn polynomial(field: F, names: &[&str]) -> Result<Arc<Self>> {
        Self::new(field, names.iter().map(|s| s.to_string()).collect(), Vec::new())
    }

    pub fn with_config(
        field: F,
        names: Vec<String>,
        relations: Vec<Poly<F>>,
        gb_config: GbConfig,
    ) -> Result<Arc<Self>> {
        // one slot is kept free for the auxiliary variable of intersections
        if names.len() >= MAX_VARS {
            return Err(AlgebraError::TooManyVariables {
                max: MAX_VARS - 1,
                got: names.len(),
            });
        }
        let ring = PolyRing::new(field, names, MonomialOrder::DegRevLex)?;
        for r in &relations {
            if r.is_zero() || r.degree() == Some(0) {
                return Err(AlgebraError::Hypothesis(format!(
                    "relation {} is not a nonconstant form",
                    ring.format(r)
                )));
            }
            if !r.is_homogeneous() {
                return Err(AlgebraError::Hypothesis(format!(
                    "relation {} is not homogeneous",
                    ring.format(r)
                )));
            }
        }
        let relation_basis = groebner_basis(&ring, &relations, gb_config)?.into_polys();
        let leads: Vec<Monomial> = relation_basis
            .iter()
            .map(|p| *p.leading_monomial().expect("nonzero"))
            .collect();
        let n = ring.nvars();
        let dim = dimension_of_leads(n, &leads);
        if dim + relations.len() != n {
            return Err(AlgebraError::Hypothesis(format!(
                "relations do not form a regular sequence: dimension {} instead of {}",
                dim,
                n - relations.len().min(n)
            )));
        }
        if dim == 0 {
            return Err(AlgebraError::Hypothesis("the ring has dimension 0".into()));
        }
        Ok(Arc::new(RingContext {
            ring,
            relations,
            relation_basis,
            dim,
            gb_config,
        }))
    }

    pub fn ring(&self) -> &PolyRing<F> {
        &self.ring
    }

    pub fn field(&self) -> &F {
        self.ring.field()
    }

    pub fn field_kind(&self) -> FieldKind {
        self.field().kind()
    }

    pub fn names(&self) -> &[String] {
        self.ring.names()
    }

    /// Number of ambient variables.
    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn relations(&self) -> &[Poly<F>] {
        &self.relations
    }

    /// Reduced Gröbner basis of the relation ideal.
    pub fn relation_basis(&self) -> &[Poly<F>] {
        &self.relation_basis
    }

    /// Krull dimension of the ring.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gb_config(&self) -> GbConfig {
        self.gb_config
    }

    /// The ring with `x` adjoined to the relations; fails unless the
    /// dimension drops by exactly one.
    pub fn adjoin(&self, x: &Poly<F>) -> Result<Arc<Self>> {
        if self.dim == 1 {
            return Err(AlgebraError::Hypothesis(
                "cannot cut a one-dimensional ring down to dimension 0".into(),
            ));
        }
        let mut rels = self.relations.clone();
        rels.push(x.clone());
        Self::with_config(self.field().clone(), self.names().to_vec(), rels, self.gb_config).map_err(|e| match e {
            AlgebraError::Hypothesis(_) => AlgebraError::Hypothesis(format!(
                "{} is a zero divisor on the ring (dimension does not drop by one)",
                self.ring.format(x)
            )),
            other => other,
        })
    }

    /// Structural equality of two contexts.
    pub fn same(&self, other: &Self) -> bool {
        std::ptr::eq(self, other) || (self.ring == other.ring && self.relations == other.relations)
    }
}

/// Dimension of `k[x]/(leads)`: the largest set of variables containing the
/// support of no leading monomial.
pub(crate) fn dimension_of_leads(nvars: usize, leads: &[Monomial]) -> usize {
    let supports: Vec<u32> = leads.iter().map(|m| m.support()).collect();
    if supports.contains(&0) {
        return 0;
    }
    let mut best = 0;
    for set in 0u32..(1u32 << nvars) {
        let size = set.count_ones() as usize;
        if size > best && supports.iter().all(|&s| s & !set != 0) {
            best = size;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PrimeField;
    use crate::io::dsl::parse_polys;

    #[test]
    fn complete_intersection_dimension() {
        let base = RingContext::polynomial(PrimeField::default(), &["x", "y", "z"]).unwrap();
        assert_eq!(base.dim(), 3);
        let rel = parse_polys(base.ring(), "x^2+y^2+z^2").unwrap();
        let q = RingContext::new(PrimeField::default(), base.names().to_vec(), rel).unwrap();
        assert_eq!(q.dim(), 2);
        let bad = parse_polys(base.ring(), "x*y, x*z").unwrap();
        assert!(matches!(
            RingContext::new(PrimeField::default(), base.names().to_vec(), bad),
            Err(AlgebraError::Hypothesis(_))
        ));
        let inhomog = parse_polys(base.ring(), "x^2+y").unwrap();
        assert!(RingContext::new(PrimeField::default(), base.names().to_vec(), inhomog).is_err());
    }

    #[test]
    fn adjoining_a_zero_divisor_fails() {
        let base = RingContext::polynomial(PrimeField::default(), &["x", "y", "z"]).unwrap();
        let rel = parse_polys(base.ring(), "x*y").unwrap();
        let q = RingContext::new(PrimeField::default(), base.names().to_vec(), rel).unwrap();
        assert_eq!(q.dim(), 2);
        let x = parse_polys(q.ring(), "x").unwrap().remove(0);
        assert!(matches!(q.adjoin(&x), Err(AlgebraError::Hypothesis(_))));
        let z = parse_polys(q.ring(), "z").unwrap().remove(0);
        let q1 = q.adjoin(&z).unwrap();
        assert_eq!(q1.dim(), 1);
        let lin = parse_polys(q.ring(), "x+y").unwrap().remove(0);
        assert!(q1.adjoin(&lin).is_err());
    }

    #[test]
    fn lead_dimension() {
        let m = |e: &[u32]| Monomial::from_exponents(e).unwrap();
        assert_eq!(dimension_of_leads(2, &[m(&[1, 0])]), 1);
        assert_eq!(dimension_of_leads(2, &[m(&[2, 0]), m(&[1, 1]), m(&[0, 2])]), 0);
        assert_eq!(dimension_of_leads(2, &[m(&[1, 1])]), 1);
        assert_eq!(dimension_of_leads(3, &[]), 3);
    }
}
