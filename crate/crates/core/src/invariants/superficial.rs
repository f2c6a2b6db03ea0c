use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{Field, Poly};
use crate::error::{AlgebraError, Result};
use crate::ideals::Ideal;

use super::setup::LocalSetup;

/// Colon checks `(K·I^{n+1} : x) = K·I^n` and `(I^{n+1} : x) = I^n` at one `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColonCheck {
    pub n: u32,
    pub fiber: bool,
    pub graded: bool,
}

#[derive(Clone, Debug)]
pub struct SuperficialRecord<F: Field> {
    pub x: Poly<F>,
    pub checks: Vec<ColonCheck>,
    pub attempts: u32,
    pub verified: bool,
}

/// Run the colon checks for `x` on `n = 0..=window`.
pub fn check_superficial<F: Field>(setup: &LocalSetup<F>, x: &Poly<F>, window: u32) -> Result<Vec<ColonCheck>> {
    let mut out = Vec::new();
    for n in 0..=window {
        let fiber = setup.k_power(n + 1)?.colon_poly(x)?.ideal_eq(&setup.k_power(n)?)?;
        let graded = setup.power(n + 1)?.colon_poly(x)?.ideal_eq(&setup.power(n)?)?;
        out.push(ColonCheck { n, fiber, graded });
    }
    Ok(out)
}

/// A random combination of the least-degree elements of `pool`, kept once
/// the colon checks pass on the window; resampled up to the retry limit.
pub fn superficial_candidate<F: Field>(
    setup: &LocalSetup<F>,
    pool: &[Poly<F>],
    window: u32,
    seed: u64,
) -> Result<SuperficialRecord<F>> {
    let low = pool
        .iter()
        .filter_map(|p| p.degree())
        .min()
        .ok_or_else(|| AlgebraError::Hypothesis("no candidate generators".into()))?;
    let lowest: Vec<Poly<F>> = pool.iter().filter(|p| p.degree() == Some(low)).cloned().collect();
    let ring = setup.i().ring();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let retries = setup.options().retries.max(1);
    let mut last = None;
    for attempt in 1..=retries {
        let x = ring.random_combination(&lowest, &mut rng);
        if x.is_zero() {
            continue;
        }
        let checks = check_superficial(setup, &x, window)?;
        let verified = checks.iter().all(|c| c.fiber && c.graded);
        let rec = SuperficialRecord {
            x,
            checks,
            attempts: attempt,
            verified,
        };
        if verified {
            return Ok(rec);
        }
        last = Some(rec);
    }
    match last {
        Some(rec) => Ok(rec),
        None => Err(AlgebraError::ResourceCap("every superficial candidate was zero".into())),
    }
}

/// The setup over `R/(x)`, with `I` and `K` replaced by their images.
pub fn quotient_by_element<F: Field>(setup: &LocalSetup<F>, x: &Poly<F>) -> Result<LocalSetup<F>> {
    if x.is_zero() {
        return Err(AlgebraError::Hypothesis("cannot divide out the zero element".into()));
    }
    if !x.is_homogeneous() {
        return Err(AlgebraError::Hypothesis("the element is not homogeneous".into()));
    }
    if !setup.i().contains(x)? {
        return Err(AlgebraError::Hypothesis("the element is not in I".into()));
    }
    let ctx = setup.context().adjoin(x)?;
    let i = LocalSetup::transport(setup.i(), &ctx)?;
    let k = if setup.k_is_unit() {
        None
    } else {
        Some(LocalSetup::transport(setup.k(), &ctx)?)
    };
    LocalSetup::new(i, k, setup.seed(), setup.options())
}

/// The image of `ideal` in the ring of `target`.
pub fn image_in<F: Field>(ideal: &Ideal<F>, target: &LocalSetup<F>) -> Result<Ideal<F>> {
    LocalSetup::transport(ideal, target.context())
}
