use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{Field, Monomial, MonomialOrder, Poly, PolyRing};
use crate::error::{AlgebraError, Result};
use crate::groebner::{buchberger, reduce_basis, GroebnerBasis};
use crate::ideals::{Ideal, RingContext};
use crate::invariants::{ratliff_rush_wrt, LocalSetup, ReductionData};

/// `λ((rr_K(I^n) ∩ I^n) / K·I^n)` for `n = 0..=upto`: the graded pieces of
/// `H^0` of `F_K(I)` with respect to its irrelevant ideal.
pub fn h0_pieces<F: Field>(setup: &LocalSetup<F>, red: &ReductionData<F>, upto: u32) -> Result<Vec<u64>> {
    let mut out = Vec::with_capacity(upto as usize + 1);
    for n in 0..=upto {
        let rr = ratliff_rush_wrt(setup, &red.j, n)?;
        let rr = rr.require_verified()?;
        let meet = rr.intersect(&setup.power(n)?)?;
        out.push(meet.quotient_length(&setup.k_power(n)?)?);
    }
    Ok(out)
}

/// `F(I) = k[f_1..f_μ] ≅ k[T_1..T_μ]/ker` for `I` generated by forms of one degree.
#[derive(Clone, Debug)]
pub struct FiberPresentation<F: Field> {
    /// The polynomial ring `k[T_1..T_μ]`.
    pub target: Arc<RingContext<F>>,
    pub kernel: Ideal<F>,
    /// The generators `f_i` of `I`, in `R`.
    pub images: Vec<Poly<F>>,
    pub degree: u32,
    source: Arc<RingContext<F>>,
    elimination: GroebnerBasis<F>,
}

impl<F: Field> FiberPresentation<F> {
    pub fn source(&self) -> &Arc<RingContext<F>> {
        &self.source
    }

    /// Write `p ∈ R` as a polynomial in the `T_i`, or `None` if `p ∉ k[f]`.
    pub fn lift(&self, p: &Poly<F>) -> Option<Poly<F>> {
        let big = self.elimination.ring();
        let nf = self.elimination.normal_form(&big.embed(p, 0));
        self.target.ring().restrict(&nf, self.source.nvars())
    }

    /// `dim_k` of the degree-`n` component of the presented algebra.
    pub fn component_dimension(&self, n: u32) -> Result<u64> {
        let leads = self.kernel.leading_monomials()?;
        let count = Monomial::all_of_degree(self.images.len(), n)
            .into_iter()
            .filter(|m| !leads.iter().any(|l| l.divides(m)))
            .count();
        Ok(count as u64)
    }

    /// The ideal of `k[T]` generated by the kernel and `extra`.
    pub fn ideal_with(&self, extra: &[Poly<F>]) -> Result<Ideal<F>> {
        let mut gens = self.kernel.gens().to_vec();
        gens.extend(extra.iter().cloned());
        Ideal::new(self.target.clone(), gens)
    }
}

/// Present the fiber cone of `I` with respect to `m` by eliminating the ring
/// variables from `(T_i − f_i) + relations`; `I` must be generated in one degree.
pub fn fiber_presentation<F: Field>(setup: &LocalSetup<F>) -> Result<FiberPresentation<F>> {
    if !setup.k_is_maximal()? {
        return Err(AlgebraError::Unsupported("the fiber presentation needs K = m".into()));
    }
    let i = setup.i();
    let degree = i
        .generator_degree()?
        .ok_or_else(|| AlgebraError::Unsupported("I is not generated in a single degree".into()))?;
    let images = i.minimal_generators()?;
    let ctx = setup.context();
    let n = ctx.nvars();
    let mu = images.len();
    if n + mu > crate::algebra::MAX_VARS || mu + 1 >= crate::algebra::MAX_VARS {
        return Err(AlgebraError::TooManyVariables {
            max: crate::algebra::MAX_VARS,
            got: n + mu,
        });
    }
    let tnames: Vec<String> = (1..=mu).map(|k| format!("T{}", k)).collect();
    let mut names: Vec<String> = ctx.names().to_vec();
    names.extend(tnames.iter().cloned());
    let big = PolyRing::new(ctx.field().clone(), names, MonomialOrder::BlockElim { k: n })?;
    let mut gens: Vec<Poly<F>> = ctx.relations().iter().map(|r| big.embed(r, 0)).collect();
    for (k, f) in images.iter().enumerate() {
        gens.push(big.sub(&big.var(n + k), &big.embed(f, 0)));
    }
    let elimination = reduce_basis(buchberger(&big, &gens, ctx.gb_config())?);
    let target = RingContext::polynomial(
        ctx.field().clone(),
        &tnames.iter().map(String::as_str).collect::<Vec<_>>(),
    )?;
    let kernel_gens: Vec<Poly<F>> = elimination
        .polys()
        .iter()
        .filter_map(|p| target.ring().restrict(p, n))
        .collect();
    let kernel = Ideal::new(target.clone(), kernel_gens)?;
    Ok(FiberPresentation {
        target,
        kernel,
        images,
        degree,
        source: ctx.clone(),
        elimination,
    })
}

/// Whether the presented algebra's Hilbert function equals `μ(I^n)` for `n = 0..=upto`.
pub fn presentation_series_check<F: Field>(
    setup: &LocalSetup<F>,
    pres: &FiberPresentation<F>,
    upto: u32,
) -> Result<Vec<(u32, u64, u64)>> {
    let ms = setup.with_k(Some(setup.maximal().clone()))?;
    let mut rows = Vec::new();
    for n in 0..=upto {
        let direct = ms.k_power_colength(n)? - ms.power_colength(n)?;
        rows.push((n, pres.component_dimension(n)?, direct));
    }
    Ok(rows)
}

/// Whether `(P + ker) : u = P + ker` in the presented algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairTest {
    pub first: usize,
    pub second: usize,
    pub regular: bool,
}

/// Regular-sequence search among the system of parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SopDepth {
    /// Indices into the parameter list; `None` marks a random combination.
    pub sequence: Vec<Option<usize>>,
    pub depth: u32,
    /// The sequence is maximal: the parameter ideal consists of zero-divisors modulo it.
    pub certified: bool,
    pub singles: Vec<bool>,
    pub pairs: Vec<PairTest>,
}

fn is_regular<F: Field>(pres: &FiberPresentation<F>, prefix: &[Poly<F>], u: &Poly<F>) -> Result<bool> {
    let base = pres.ideal_with(prefix)?;
    base.colon_poly(u)?.ideal_eq(&base)
}

/// Greedy regular-sequence search: parameters in input order, then random
/// combinations; maximality is certified by `(P + ker) : Q ≠ P + ker` for
/// the parameter ideal `Q`. Every single and ordered pair is also tested.
pub fn depth_by_sop<F: Field>(
    pres: &FiberPresentation<F>,
    sop: &[Poly<F>],
    seed: u64,
    retries: u32,
) -> Result<SopDepth> {
    let singles = sop
        .iter()
        .map(|u| is_regular(pres, &[], u))
        .collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::new();
    for (a, ua) in sop.iter().enumerate() {
        for (b, ub) in sop.iter().enumerate() {
            if a != b {
                pairs.push(PairTest {
                    first: a,
                    second: b,
                    regular: singles[a] && is_regular(pres, std::slice::from_ref(ua), ub)?,
                });
            }
        }
    }
    let ring = pres.target.ring();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sequence = Vec::new();
    let mut chosen: Vec<Poly<F>> = Vec::new();
    let q = pres.ideal_with(sop)?;
    let certified = loop {
        let base = pres.ideal_with(&chosen)?;
        if !base.colon(&q)?.ideal_eq(&base)? {
            break true;
        }
        if chosen.len() == sop.len() {
            break false;
        }
        let mut found = None;
        for (k, u) in sop.iter().enumerate() {
            if !sequence.contains(&Some(k)) && is_regular(pres, &chosen, u)? {
                found = Some((Some(k), u.clone()));
                break;
            }
        }
        if found.is_none() {
            for _ in 0..retries.max(1) {
                let u = ring.random_combination(sop, &mut rng);
                if !u.is_zero() && is_regular(pres, &chosen, &u)? {
                    found = Some((None, u));
                    break;
                }
            }
        }
        match found {
            Some((tag, u)) => {
                sequence.push(tag);
                chosen.push(u);
            }
            None => break false,
        }
    };
    Ok(SopDepth {
        depth: chosen.len() as u32,
        sequence,
        certified,
        singles,
        pairs,
    })
}

/// The parameters `J` written in the presentation variables.
pub fn sop_images<F: Field>(pres: &FiberPresentation<F>, red: &ReductionData<F>) -> Result<Vec<Poly<F>>> {
    red.j
        .gens()
        .iter()
        .map(|g| {
            pres.lift(g)
                .ok_or_else(|| AlgebraError::Hypothesis("a generator of J is not in k[I_t]".into()))
        })
        .collect()
}

/// Depth information on `F_K(I)` and `G(I)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DepthReport {
    /// Lower bound for `depth F_K(I)`.
    pub fiber_lower_bound: u32,
    /// All `H^0` pieces of `F_K(I)` vanish.
    pub fiber_depth_positive: bool,
    pub fiber_h0: Vec<u64>,
    /// `depth G(I) ≥ 1`, from the `H^0` pieces of `F_I(I)`.
    pub graded_depth_positive: bool,
    pub graded_h0: Vec<u64>,
    /// `depth F(I)` from the parameter search, when it was certified.
    pub exact_fiber_depth: Option<u32>,
    pub sop: Option<SopDepth>,
    pub evidence: Vec<String>,
}

/// Combine the `H^0` criterion for `F_K(I)` and `G(I)` with the parameter
/// search on the fiber cone presentation (when `K = m` and `I` is equigenerated).
pub fn depth_report<F: Field>(setup: &LocalSetup<F>, red: &ReductionData<F>, upto: u32) -> Result<DepthReport> {
    let mut evidence = Vec::new();
    let fiber_h0 = h0_pieces(setup, red, upto)?;
    let fiber_depth_positive = fiber_h0.iter().all(|&x| x == 0);
    if let Some((n, l)) = fiber_h0.iter().enumerate().find(|(_, &l)| l > 0) {
        evidence.push(format!("H0 of F_K(I) has length {} in degree {}", l, n));
    }
    let gs = setup.with_k(Some(setup.i().clone()))?;
    let graded_h0 = h0_pieces(&gs, red, upto)?;
    let graded_depth_positive = graded_h0.iter().all(|&x| x == 0);
    if let Some((n, l)) = graded_h0.iter().enumerate().find(|(_, &l)| l > 0) {
        evidence.push(format!("H0 of G(I) has length {} in degree {}", l, n));
    }
    let mut sop = None;
    let mut exact = None;
    let equi = setup.i().generator_degree()?.is_some();
    if setup.k_is_maximal()? && equi && red.j.generator_degree()? == setup.i().generator_degree()? {
        match fiber_presentation(setup) {
            Ok(pres) => {
                let images = sop_images(&pres, red)?;
                let report = depth_by_sop(&pres, &images, setup.seed(), setup.options().retries)?;
                if report.certified {
                    exact = Some(report.depth);
                    evidence.push(format!("parameter search certifies depth F(I) = {}", report.depth));
                }
                sop = Some(report);
            }
            Err(AlgebraError::TooManyVariables { .. }) => {
                evidence.push("fiber presentation skipped: too many variables".into());
            }
            Err(e) => return Err(e),
        }
    }
    let mut lower = u32::from(fiber_depth_positive);
    if let Some(s) = &sop {
        lower = lower.max(s.depth);
    }
    if let Some(x) = exact {
        if fiber_depth_positive != (x > 0) {
            return Err(AlgebraError::Defect(format!(
                "H0 criterion and parameter search disagree (depth {})",
                x
            )));
        }
    }
    Ok(DepthReport {
        fiber_lower_bound: lower,
        fiber_depth_positive,
        fiber_h0,
        graded_depth_positive,
        graded_h0,
        exact_fiber_depth: exact,
        sop,
        evidence,
    })
}
