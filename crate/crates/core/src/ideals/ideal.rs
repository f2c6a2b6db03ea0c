use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::algebra::{Field, Monomial, MonomialOrder, Poly, PolyRing};
use crate::error::{AlgebraError, Result};
use crate::groebner::{assume_groebner, buchberger, groebner_basis, reduce_basis, GbConfig, GroebnerBasis};

use super::context::{dimension_of_leads, RingContext};

/// A homogeneous ideal of the context ring, with its reduced degrevlex
/// Gröbner basis (relations adjoined) computed on first use.
pub struct Ideal<F: Field> {
    ctx: Arc<RingContext<F>>,
    gens: Vec<Poly<F>>,
    gb: OnceLock<GroebnerBasis<F>>,
}

impl<F: Field> Clone for Ideal<F> {
    fn clone(&self) -> Self {
        Ideal {
            ctx: self.ctx.clone(),
            gens: self.gens.clone(),
            gb: self.gb.clone(),
        }
    }
}

impl<F: Field> fmt::Debug for Ideal<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.format())
    }
}

impl<F: Field> Ideal<F> {
    /// The ideal generated by `gens`; every generator must be homogeneous.
    pub fn new(ctx: Arc<RingContext<F>>, gens: Vec<Poly<F>>) -> Result<Self> {
        for g in &gens {
            if !g.is_homogeneous() {
                return Err(AlgebraError::Hypothesis(format!(
                    "generator {} is not homogeneous",
                    ctx.ring().format(g)
                )));
            }
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Ideal {
            ctx,
            gens,
            gb: OnceLock::new(),
        })
    }

    /// An ideal whose reduced basis is already known.
    fn from_basis(ctx: Arc<RingContext<F>>, gb: GroebnerBasis<F>) -> Self {
        debug_assert!(gb.is_reduced());
        let rel = ctx.relation_basis();
        let gens = gb
            .polys()
            .iter()
            .filter(|p| !crate::groebner::normal_form(ctx.ring(), p, rel).is_zero())
            .cloned()
            .collect();
        let cell = OnceLock::new();
        let _ = cell.set(gb);
        Ideal { ctx, gens, gb: cell }
    }

    pub fn unit(ctx: Arc<RingContext<F>>) -> Self {
        let one = ctx.ring().one();
        Ideal::new(ctx, vec![one]).expect("constants are homogeneous")
    }

    pub fn zero(ctx: Arc<RingContext<F>>) -> Self {
        Ideal::new(ctx, Vec::new()).expect("no generators")
    }

    /// The homogeneous maximal ideal generated by all variables.
    pub fn maximal(ctx: Arc<RingContext<F>>) -> Self {
        let vars = (0..ctx.nvars()).map(|i| ctx.ring().var(i)).collect();
        Ideal::new(ctx, vars).expect("variables are homogeneous")
    }

    pub fn context(&self) -> &Arc<RingContext<F>> {
        &self.ctx
    }

    pub fn ring(&self) -> &PolyRing<F> {
        self.ctx.ring()
    }

    pub fn gens(&self) -> &[Poly<F>] {
        &self.gens
    }

    pub fn format(&self) -> String {
        let g: Vec<String> = self.gens.iter().map(|p| self.ring().format(p)).collect();
        g.join(", ")
    }

    /// Reduced Gröbner basis of `gens + relations` in degrevlex.
    pub fn groebner(&self) -> Result<&GroebnerBasis<F>> {
        if let Some(gb) = self.gb.get() {
            return Ok(gb);
        }
        let mut all = self.gens.clone();
        all.extend(self.ctx.relation_basis().iter().cloned());
        let gb = groebner_basis(self.ring(), &all, self.ctx.gb_config())?;
        let _ = self.gb.set(gb);
        Ok(self.gb.get().expect("just set"))
    }

    /// Basis elements that are nonzero in the quotient ring.
    pub fn basis_generators(&self) -> Result<Vec<Poly<F>>> {
        let rel = self.ctx.relation_basis();
        Ok(self
            .groebner()?
            .polys()
            .iter()
            .filter(|p| !crate::groebner::normal_form(self.ring(), p, rel).is_zero())
            .cloned()
            .collect())
    }

    pub fn leading_monomials(&self) -> Result<Vec<Monomial>> {
        Ok(self.groebner()?.leading_monomials())
    }

    fn check_context(&self, other: &Ideal<F>) -> Result<()> {
        if self.ctx.same(&other.ctx) {
            Ok(())
        } else {
            Err(AlgebraError::ContextMismatch)
        }
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.groebner()?.is_unit())
    }

    /// True when the ideal is zero in the quotient ring.
    pub fn is_zero(&self) -> Result<bool> {
        let rel = self.ctx.relation_basis();
        Ok(self
            .gens
            .iter()
            .all(|g| crate::groebner::normal_form(self.ring(), g, rel).is_zero()))
    }

    pub fn contains(&self, f: &Poly<F>) -> Result<bool> {
        Ok(self.groebner()?.contains(f))
    }

    pub fn normal_form(&self, f: &Poly<F>) -> Result<Poly<F>> {
        Ok(self.groebner()?.normal_form(f))
    }

    /// `self ⊆ other`.
    pub fn leq(&self, other: &Ideal<F>) -> Result<bool> {
        self.check_context(other)?;
        let gb = other.groebner()?;
        Ok(self.gens.iter().all(|g| gb.contains(g)))
    }

    pub fn ideal_eq(&self, other: &Ideal<F>) -> Result<bool> {
        self.check_context(other)?;
        Ok(self.groebner()?.polys() == other.groebner()?.polys())
    }

    pub fn sum(&self, other: &Ideal<F>) -> Result<Ideal<F>> {
        self.check_context(other)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(self.ctx.clone(), gens)
    }

    /// Product, generated by pairwise products of the two reduced bases.
    pub fn product(&self, other: &Ideal<F>) -> Result<Ideal<F>> {
        self.check_context(other)?;
        let a = self.basis_generators()?;
        let b = other.basis_generators()?;
        let ring = self.ring();
        let mut gens = Vec::with_capacity(a.len() * b.len());
        for f in &a {
            for g in &b {
                gens.push(ring.mul(f, g));
            }
        }
        let out = Ideal::new(self.ctx.clone(), gens)?;
        out.groebner()?;
        Ok(out)
    }

    pub fn power(&self, n: u32) -> Result<Ideal<F>> {
        let mut acc = Ideal::unit(self.ctx.clone());
        for _ in 0..n {
            acc = acc.product(self)?;
        }
        Ok(acc)
    }

    /// Multiply every generator by `f`.
    pub fn scale(&self, f: &Poly<F>) -> Result<Ideal<F>> {
        let gens = self.basis_generators()?.iter().map(|g| self.ring().mul(g, f)).collect();
        Ideal::new(self.ctx.clone(), gens)
    }

    /// Intersection by eliminating `t` from `t·A + (1 − t)·B`.
    pub fn intersect(&self, other: &Ideal<F>) -> Result<Ideal<F>> {
        self.check_context(other)?;
        let a = self.groebner()?.polys().to_vec();
        let b = other.groebner()?.polys().to_vec();
        let polys = intersect_polys(self.ring(), &a, &b, self.ctx.gb_config())?;
        let gb = reduce_basis(assume_groebner(self.ring(), polys));
        Ok(Ideal::from_basis(self.ctx.clone(), gb))
    }

    /// `self : (g)`, computed as `(1/g)·(self ∩ (g))` in the ambient polynomial ring.
    pub fn colon_poly(&self, g: &Poly<F>) -> Result<Ideal<F>> {
        let ring = self.ring();
        let g = crate::groebner::normal_form(ring, g, self.ctx.relation_basis());
        if g.is_zero() {
            return Ok(Ideal::unit(self.ctx.clone()));
        }
        if g.degree() == Some(0) {
            return Ok(self.clone());
        }
        let a = self.groebner()?.polys().to_vec();
        let inter = intersect_polys(ring, &a, std::slice::from_ref(&g), self.ctx.gb_config())?;
        let quotients = inter
            .iter()
            .map(|h| ring.exact_div(h, &g))
            .collect::<Result<Vec<_>>>()
            .map_err(|_| AlgebraError::Defect("intersection element not divisible by the colon generator".into()))?;
        let gb = reduce_basis(assume_groebner(ring, quotients));
        Ok(Ideal::from_basis(self.ctx.clone(), gb))
    }

    /// `self : other`, the intersection of the colons by each generator.
    pub fn colon(&self, other: &Ideal<F>) -> Result<Ideal<F>> {
        self.check_context(other)?;
        let mut acc: Option<Ideal<F>> = None;
        for g in &other.gens {
            let c = self.colon_poly(g)?;
            acc = Some(match acc {
                None => c,
                Some(prev) => {
                    if prev.leq(&c)? {
                        prev
                    } else if c.leq(&prev)? {
                        c
                    } else {
                        prev.intersect(&c)?
                    }
                }
            });
        }
        Ok(acc.unwrap_or_else(|| Ideal::unit(self.ctx.clone())))
    }

    /// Krull dimension of `R/self`.
    pub fn krull_dimension(&self) -> Result<usize> {
        let gb = self.groebner()?;
        if gb.is_unit() {
            return Err(AlgebraError::Hypothesis("the unit ideal has no dimension".into()));
        }
        Ok(dimension_of_leads(self.ctx.nvars(), &gb.leading_monomials()))
    }

    /// `R/self` has finite length (the unit ideal included).
    pub fn is_cofinite(&self) -> Result<bool> {
        let gb = self.groebner()?;
        if gb.is_unit() {
            return Ok(true);
        }
        let leads = gb.leading_monomials();
        Ok((0..self.ctx.nvars()).all(|i| leads.iter().any(|m| m.support() == 1 << i)))
    }

    /// Proper with `R/self` of finite length.
    pub fn is_zero_dimensional(&self) -> Result<bool> {
        Ok(!self.is_unit()? && self.is_cofinite()?)
    }

    /// All generators lie in the homogeneous maximal ideal.
    pub fn in_maximal(&self) -> bool {
        self.gens.iter().all(|g| g.degree().is_none_or(|d| d > 0))
    }

    /// m-primary: proper, cofinite, inside m.
    pub fn is_m_primary(&self) -> Result<bool> {
        Ok(self.in_maximal() && self.is_zero_dimensional()?)
    }

    /// Standard monomials of `R/self`, grouped by degree.
    pub fn standard_monomials(&self) -> Result<Vec<Vec<Monomial>>> {
        if !self.is_cofinite()? {
            return Err(AlgebraError::Hypothesis(format!(
                "({}) is not zero-dimensional",
                self.format()
            )));
        }
        let gb = self.groebner()?;
        if gb.is_unit() {
            return Ok(Vec::new());
        }
        let leads = gb.leading_monomials();
        let n = self.ctx.nvars();
        let standard = |m: &Monomial| !leads.iter().any(|l| l.divides(m));
        let mut by_degree: Vec<Vec<Monomial>> = vec![vec![Monomial::one(n)]];
        // extend each monomial only by variables at or after its last variable
        let mut frontier: Vec<(Monomial, usize)> = vec![(Monomial::one(n), 0)];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (m, last) in &frontier {
                for i in *last..n {
                    let mm = m.mul(&Monomial::var(n, i));
                    if standard(&mm) {
                        next.push((mm, i));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            by_degree.push(next.iter().map(|(m, _)| *m).collect());
            frontier = next;
        }
        Ok(by_degree)
    }

    /// `λ(R/self)`, the number of standard monomials.
    pub fn colength(&self) -> Result<u64> {
        Ok(self.standard_monomials()?.iter().map(|d| d.len() as u64).sum())
    }

    /// `λ(self/sub)` for `sub ⊆ self`, both cofinite.
    pub fn quotient_length(&self, sub: &Ideal<F>) -> Result<u64> {
        if !sub.leq(self)? {
            return Err(AlgebraError::Hypothesis(format!(
                "({}) is not contained in ({})",
                sub.format(),
                self.format()
            )));
        }
        let big = self.colength()?;
        let small = sub.colength()?;
        Ok(small - big)
    }

    /// A minimal homogeneous generating set: generators are scanned by degree
    /// and kept when not in the ideal of those kept before.
    pub fn minimal_generators(&self) -> Result<Vec<Poly<F>>> {
        if !self.in_maximal() {
            return Err(AlgebraError::Hypothesis(format!(
                "({}) is not contained in the maximal ideal",
                self.format()
            )));
        }
        let rel = self.ctx.relation_basis();
        let mut cands: Vec<Poly<F>> = self
            .gens
            .iter()
            .map(|g| crate::groebner::normal_form(self.ring(), g, rel))
            .filter(|g| !g.is_zero())
            .collect();
        cands.sort_by_key(|g| g.degree());
        let mut kept: Vec<Poly<F>> = Vec::new();
        let mut current = Ideal::zero(self.ctx.clone());
        for g in cands {
            if !current.contains(&g)? {
                kept.push(g);
                current = Ideal::new(self.ctx.clone(), kept.clone())?;
            }
        }
        Ok(kept)
    }

    /// `μ(self)`: `λ(A/mA)` for cofinite ideals, otherwise the size of a
    /// degreewise minimal generating set.
    pub fn min_generators(&self) -> Result<u64> {
        if !self.in_maximal() {
            return Err(AlgebraError::Hypothesis(format!(
                "({}) is not contained in the maximal ideal",
                self.format()
            )));
        }
        if self.is_zero()? {
            return Ok(0);
        }
        if self.is_cofinite()? {
            let m = Ideal::maximal(self.ctx.clone());
            let ma = m.product(self)?;
            return self.quotient_length(&ma);
        }
        Ok(self.minimal_generators()?.len() as u64)
    }

    /// The common degree of a minimal generating set, if there is one.
    pub fn generator_degree(&self) -> Result<Option<u32>> {
        let mins = self.minimal_generators()?;
        let d = mins.first().and_then(|g| g.degree());
        Ok(if mins.iter().all(|g| g.degree() == d) { d } else { None })
    }
}

/// Generators of `(a) ∩ (b)` in the ambient polynomial ring, returned as a
/// degrevlex Gröbner basis.
pub(crate) fn intersect_polys<F: Field>(
    ring: &PolyRing<F>,
    a: &[Poly<F>],
    b: &[Poly<F>],
    cfg: GbConfig,
) -> Result<Vec<Poly<F>>> {
    let n = ring.nvars();
    let mut names = vec!["_t".to_string()];
    names.extend(ring.names().iter().cloned());
    let big = PolyRing::new(ring.field().clone(), names, MonomialOrder::BlockElim { k: 1 })?;
    let t = big.var(0);
    let one_minus_t = big.sub(&big.one(), &t);
    let mut gens = Vec::with_capacity(a.len() + b.len());
    for f in a {
        gens.push(big.mul(&t, &big.embed(f, 1)));
    }
    for g in b {
        gens.push(big.mul(&one_minus_t, &big.embed(g, 1)));
    }
    eliminate(&big, &gens, 1, ring, cfg).inspect(|v| {
        debug_assert!(v.iter().all(|p| p.leading_monomial().is_none_or(|m| m.arity() == n)));
    })
}

/// Eliminate the first `k` variables of `big` (whose order must be
/// `BlockElim { k }`) from the ideal generated by `gens`; the surviving basis
/// elements are mapped into `small`, which holds the remaining variables.
pub fn eliminate<F: Field>(
    big: &PolyRing<F>,
    gens: &[Poly<F>],
    k: usize,
    small: &PolyRing<F>,
    cfg: GbConfig,
) -> Result<Vec<Poly<F>>> {
    debug_assert_eq!(big.order(), MonomialOrder::BlockElim { k });
    debug_assert_eq!(big.nvars(), small.nvars() + k);
    let gb = buchberger(big, gens, cfg)?;
    Ok(gb.polys().iter().filter_map(|p| small.restrict(p, k)).collect())
}
