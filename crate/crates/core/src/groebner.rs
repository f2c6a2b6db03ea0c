//! Multivariate division and Buchberger's algorithm.
//!
//! Pairs are processed by the normal strategy (smallest lcm degree first) with
//! the Gebauer–Möller installation of the coprime-lead and chain criteria.
//! Output bases are made canonical by [`reduce_basis`].

use crate::algebra::{Field, Monomial, MonomialOrder, Poly, PolyRing};
use crate::error::{AlgebraError, Result};

pub const DEFAULT_PAIR_CAP: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    /// Smallest lcm degree first.
    Normal,
    /// Smallest sugar degree first.
    Sugar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GbConfig {
    /// Maximum number of S-pair reductions before giving up.
    pub pair_cap: usize,
    pub selection: Selection,
}

impl Default for GbConfig {
    fn default() -> Self {
        GbConfig {
            pair_cap: DEFAULT_PAIR_CAP,
            selection: Selection::Normal,
        }
    }
}

/// A Gröbner basis together with the ring (and hence order) it was computed in.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<F: Field> {
    ring: PolyRing<F>,
    polys: Vec<Poly<F>>,
    reduced: bool,
}

impl<F: Field> PartialEq for GroebnerBasis<F> {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.polys == other.polys && self.reduced == other.reduced
    }
}

impl<F: Field> GroebnerBasis<F> {
    pub fn ring(&self) -> &PolyRing<F> {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.ring.order()
    }

    pub fn polys(&self) -> &[Poly<F>] {
        &self.polys
    }

    pub fn into_polys(self) -> Vec<Poly<F>> {
        self.polys
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// The zero ideal has the empty basis.
    pub fn is_zero_ideal(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.polys
            .iter()
            .any(|p| p.leading_monomial().is_some_and(|m| m.is_one()))
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys
            .iter()
            .filter_map(|p| p.leading_monomial().copied())
            .collect()
    }

    pub fn normal_form(&self, f: &Poly<F>) -> Poly<F> {
        Reducer::new(&self.ring, &self.polys).reduce(f)
    }

    pub fn contains(&self, f: &Poly<F>) -> bool {
        self.normal_form(f).is_zero()
    }
}

/// Divisor lookup with cached leading data. Candidates are tried in list order.
struct Reducer<'a, F: Field> {
    ring: &'a PolyRing<F>,
    entries: Vec<(Monomial, u32, F::Elem, &'a Poly<F>)>,
}

impl<'a, F: Field> Reducer<'a, F> {
    fn new(ring: &'a PolyRing<F>, basis: &'a [Poly<F>]) -> Self {
        Self::from_iter(ring, basis.iter())
    }

    fn from_iter<I: Iterator<Item = &'a Poly<F>>>(ring: &'a PolyRing<F>, basis: I) -> Self {
        let entries = basis
            .filter_map(|p| {
                let (m, c) = ring.leading_term(p)?;
                let inv = ring.field().inv(c).expect("nonzero leading coefficient");
                Some((*m, m.support(), inv, p))
            })
            .collect();
        Reducer { ring, entries }
    }

    #[inline]
    fn find(&self, m: &Monomial) -> Option<&(Monomial, u32, F::Elem, &'a Poly<F>)> {
        let mask = m.support();
        self.entries
            .iter()
            .find(|(lm, lmask, _, _)| lmask & !mask == 0 && lm.divides(m))
    }

    /// Full reduction: every term of the result is irreducible.
    fn reduce(&self, f: &Poly<F>) -> Poly<F> {
        let field = self.ring.field();
        let mut rest = f.clone().into_terms();
        let mut done: Vec<(Monomial, F::Elem)> = Vec::new();
        let mut pos = 0;
        while pos < rest.len() {
            let (m, c) = &rest[pos];
            match self.find(m) {
                None => {
                    pos += 1;
                }
                Some((lm, _, inv, g)) => {
                    let q = lm.quotient_of(m);
                    let coef = field.mul(c, inv);
                    let tail = Poly::from_sorted_unchecked(rest.split_off(pos));
                    let reduced = self.ring.sub_mul_term(&tail, &coef, &q, g);
                    done.append(&mut rest);
                    rest = reduced.into_terms();
                    pos = 0;
                }
            }
        }
        done.extend(rest);
        Poly::from_sorted_unchecked(done)
    }

    /// Reduce only until the leading term is irreducible.
    fn top_reduce(&self, f: &Poly<F>) -> Poly<F> {
        let field = self.ring.field();
        let mut p = f.clone();
        while let Some((m, c)) = self.ring.leading_term(&p) {
            match self.find(m) {
                None => break,
                Some((lm, _, inv, g)) => {
                    let q = lm.quotient_of(m);
                    let coef = field.mul(c, inv);
                    p = self.ring.sub_mul_term(&p, &coef, &q, g);
                }
            }
        }
        p
    }
}

/// Remainder of `f` on division by `basis`: repeatedly cancel the highest
/// reducible term using the earliest-listed divisor.
pub fn normal_form<F: Field>(ring: &PolyRing<F>, f: &Poly<F>, basis: &[Poly<F>]) -> Poly<F> {
    Reducer::new(ring, basis).reduce(f)
}

/// `S(f, g) = (L/lt(f)) f - (L/lt(g)) g` with `L = lcm(lm f, lm g)` and
/// leading terms taken monic, so the leading terms cancel with coefficient one.
pub fn s_polynomial<F: Field>(ring: &PolyRing<F>, f: &Poly<F>, g: &Poly<F>) -> Result<Poly<F>> {
    let (mf, cf) = ring.leading_term(f).ok_or(AlgebraError::ZeroPolynomial)?;
    let (mg, cg) = ring.leading_term(g).ok_or(AlgebraError::ZeroPolynomial)?;
    let field = ring.field();
    let l = mf.lcm(mg);
    let a = ring.mul_term(f, &mf.quotient_of(&l), &field.inv(cf)?);
    let ginv = field.inv(cg)?;
    Ok(ring.sub_mul_term(&a, &ginv, &mg.quotient_of(&l), g))
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

struct Builder<'r, F: Field> {
    ring: &'r PolyRing<F>,
    cfg: GbConfig,
    polys: Vec<Poly<F>>,
    lms: Vec<Monomial>,
    sugar: Vec<u32>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
    reductions: usize,
}

impl<'r, F: Field> Builder<'r, F> {
    fn reduce(&self, f: &Poly<F>) -> Poly<F> {
        let reducer = Reducer::from_iter(self.ring, self.active.iter().map(|&k| &self.polys[k]));
        let p = reducer.top_reduce(f);
        if p.is_zero() {
            p
        } else {
            reducer.reduce(&p)
        }
    }

    fn insert(&mut self, h: Poly<F>, sugar: u32) {
        let h = self.ring.monic(&h);
        let lm_h = *h.leading_monomial().expect("nonzero");
        let hi = self.polys.len();
        self.polys.push(h);
        self.lms.push(lm_h);
        self.sugar.push(sugar);

        // new pairs (h, g), filtered by the chain criterion among themselves
        let cand: Vec<(usize, Monomial)> = self.active.iter().map(|&g| (g, lm_h.lcm(&self.lms[g]))).collect();
        let mut kept: Vec<(usize, Monomial)> = Vec::new();
        for (idx, (g, l)) in cand.iter().enumerate() {
            let coprime = lm_h.gcd_is_one(&self.lms[*g]);
            let dominated =
                cand[idx + 1..].iter().any(|(_, l2)| l2.divides(l)) || kept.iter().any(|(_, l2)| l2.divides(l));
            if coprime || !dominated {
                kept.push((*g, *l));
            }
        }
        kept.retain(|(g, _)| !lm_h.gcd_is_one(&self.lms[*g]));

        // old pairs made redundant by h
        let lms = &self.lms;
        self.pairs
            .retain(|p| !(lm_h.divides(&p.lcm) && lm_h.lcm(&lms[p.i]) != p.lcm && lm_h.lcm(&lms[p.j]) != p.lcm));
        for (g, l) in kept {
            let s = (self.sugar[g] + l.degree() - self.lms[g].degree()).max(sugar + l.degree() - lm_h.degree());
            self.pairs.push(Pair {
                i: g,
                j: hi,
                lcm: l,
                sugar: s,
            });
        }
        self.active.retain(|&g| !lm_h.divides(&lms[g]));
        self.active.push(hi);
    }

    fn pick(&mut self) -> Option<Pair> {
        let ring = self.ring;
        let sel = self.cfg.selection;
        let key = |p: &Pair| match sel {
            Selection::Normal => p.lcm.degree(),
            Selection::Sugar => p.sugar,
        };
        let best = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                key(a)
                    .cmp(&key(b))
                    .then_with(|| ring.cmp(&a.lcm, &b.lcm))
                    .then_with(|| (a.i, a.j).cmp(&(b.i, b.j)))
            })
            .map(|(k, _)| k)?;
        Some(self.pairs.swap_remove(best))
    }
}

/// Gröbner basis of the ideal generated by `gens` (not yet reduced).
pub fn buchberger<F: Field>(ring: &PolyRing<F>, gens: &[Poly<F>], cfg: GbConfig) -> Result<GroebnerBasis<F>> {
    let mut b = Builder {
        ring,
        cfg,
        polys: Vec::new(),
        lms: Vec::new(),
        sugar: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
        reductions: 0,
    };
    let mut inputs: Vec<&Poly<F>> = gens.iter().filter(|g| !g.is_zero()).collect();
    inputs.sort_by(|a, b| {
        let (ma, mb) = (a.leading_monomial().unwrap(), b.leading_monomial().unwrap());
        ring.cmp(ma, mb)
    });
    for g in inputs {
        let h = b.reduce(g);
        if !h.is_zero() {
            let sugar = g.degree().unwrap_or(0);
            b.insert(h, sugar);
        }
    }
    while let Some(pair) = b.pick() {
        b.reductions += 1;
        if b.reductions > cfg.pair_cap {
            return Err(AlgebraError::ResourceCap(format!(
                "Buchberger exceeded {} pair reductions",
                cfg.pair_cap
            )));
        }
        let s = s_polynomial(ring, &b.polys[pair.i], &b.polys[pair.j])?;
        let h = b.reduce(&s);
        if !h.is_zero() {
            b.insert(h, pair.sugar);
        }
    }
    let polys = b.active.iter().map(|&k| b.polys[k].clone()).collect();
    Ok(GroebnerBasis {
        ring: ring.clone(),
        polys,
        reduced: false,
    })
}

/// Interreduce until no term of any element is divisible by another element's
/// leading monomial; elements are made monic and sorted by ascending leading
/// monomial. On a Gröbner basis this yields the unique reduced basis.
pub fn reduce_basis<F: Field>(basis: GroebnerBasis<F>) -> GroebnerBasis<F> {
    let ring = basis.ring;
    let mut polys: Vec<Poly<F>> = basis
        .polys
        .into_iter()
        .filter(|p| !p.is_zero())
        .map(|p| ring.monic(&p))
        .collect();
    polys.sort_by(|a, b| ring.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < polys.len() {
            let r = {
                let others = polys.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, p)| p);
                Reducer::from_iter(&ring, others).reduce(&polys[i])
            };
            if r != polys[i] {
                changed = true;
                if r.is_zero() {
                    polys.remove(i);
                    continue;
                }
                polys[i] = ring.monic(&r);
            }
            i += 1;
        }
        if !changed {
            break;
        }
        polys.sort_by(|a, b| ring.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    }
    polys.sort_by(|a, b| ring.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    GroebnerBasis {
        ring,
        polys,
        reduced: true,
    }
}

/// Wrap polynomials already known to form a Gröbner basis of their ideal.
pub(crate) fn assume_groebner<F: Field>(ring: &PolyRing<F>, polys: Vec<Poly<F>>) -> GroebnerBasis<F> {
    GroebnerBasis {
        ring: ring.clone(),
        polys,
        reduced: false,
    }
}

/// Reduced Gröbner basis in one call.
pub fn groebner_basis<F: Field>(ring: &PolyRing<F>, gens: &[Poly<F>], cfg: GbConfig) -> Result<GroebnerBasis<F>> {
    Ok(reduce_basis(buchberger(ring, gens, cfg)?))
}

/// Check the Buchberger criterion directly: every S-polynomial reduces to zero.
pub fn is_groebner<F: Field>(ring: &PolyRing<F>, basis: &[Poly<F>]) -> bool {
    let reducer = Reducer::new(ring, basis);
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let s = s_polynomial(ring, &basis[i], &basis[j]).expect("nonzero basis elements");
            if !reducer.reduce(&s).is_zero() {
                return false;
            }
        }
    }
    true
}
