use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Field, Monomial, Poly};
use crate::error::{AlgebraError, Result};
use crate::ideals::Ideal;

use super::hilbert::hilbert_data;
use super::setup::LocalSetup;

/// A minimal reduction `J` of `I` with its reduction numbers.
#[derive(Clone, Debug)]
pub struct ReductionData<F: Field> {
    pub j: Ideal<F>,
    /// `r_J(I)`: least `n` with `I^{n+1} = J·I^n`.
    pub r: u32,
    /// `r_J^K(I)`: least `n` with `K·I^{n+1} = K·J·I^n`.
    pub s: u32,
    pub verified: bool,
    pub attempts: u32,
}

/// Least `n ≤ cap` with `I^{n+1} = J·I^n`.
pub fn reduction_number<F: Field>(setup: &LocalSetup<F>, j: &Ideal<F>, cap: u32) -> Result<u32> {
    if !j.leq(setup.i())? {
        return Err(AlgebraError::Hypothesis("J is not contained in I".into()));
    }
    for n in 0..=cap {
        let lhs = setup.power(n + 1)?;
        let rhs = setup.j_power(j, n)?;
        if lhs.ideal_eq(&rhs)? {
            return Ok(n);
        }
    }
    Err(AlgebraError::ResourceCap(format!(
        "no n <= {} with I^(n+1) = J I^n",
        cap
    )))
}

/// Least `n ≤ cap` with `K·I^{n+1} = K·J·I^n`.
pub fn k_reduction_number<F: Field>(setup: &LocalSetup<F>, j: &Ideal<F>, cap: u32) -> Result<u32> {
    if setup.k_is_unit() {
        return reduction_number(setup, j, cap);
    }
    for n in 0..=cap {
        let lhs = setup.k_power(n + 1)?;
        let rhs = setup.kj_power(j, n)?;
        if lhs.ideal_eq(&rhs)? {
            return Ok(n);
        }
    }
    Err(AlgebraError::ResourceCap(format!(
        "no n <= {} with K I^(n+1) = K J I^n",
        cap
    )))
}

/// Verify a given `J` (d generators inside `I`) and compute `r` and `s`.
pub fn reduction_data<F: Field>(setup: &LocalSetup<F>, j: Ideal<F>, cap: u32) -> Result<ReductionData<F>> {
    let d = setup.dim();
    if !j.leq(setup.i())? {
        return Err(AlgebraError::Hypothesis("J is not contained in I".into()));
    }
    let mu = j.min_generators()?;
    if mu as usize != d {
        return Err(AlgebraError::Hypothesis(format!(
            "J needs {} generators, the ring has dimension {}",
            mu, d
        )));
    }
    let r = reduction_number(setup, &j, cap)?;
    let s = k_reduction_number(setup, &j, cap)?;
    Ok(ReductionData {
        j,
        r,
        s,
        verified: true,
        attempts: 1,
    })
}

/// Nondecreasing degree vectors `δ` of length `d` in `[lo, hi]` with `Π δ = target`.
fn degree_vectors(d: usize, lo: u32, hi: u32, target: u64) -> Vec<Vec<u32>> {
    fn go(d: usize, from: u32, hi: u32, left: u64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == d {
            if left == 1 {
                out.push(cur.clone());
            }
            return;
        }
        for t in from..=hi {
            if left.is_multiple_of(t as u64) {
                cur.push(t);
                go(d, t, hi, left / t as u64, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if lo == 0 {
        return out;
    }
    go(d, lo, hi, target, &mut Vec::new(), &mut out);
    out
}

/// A random element of the degree-`t` component of `I` (combinations of
/// generators times monomials).
fn random_element<F: Field>(i: &Ideal<F>, gens: &[Poly<F>], t: u32, rng: &mut ChaCha8Rng) -> Poly<F> {
    let ring = i.ring();
    let n = ring.nvars();
    let mut spanning = Vec::new();
    for g in gens {
        let dg = g.degree().unwrap_or(0);
        if dg <= t {
            for m in Monomial::all_of_degree(n, t - dg) {
                spanning.push(ring.mul_term(g, &m, &ring.field().one()));
            }
        }
    }
    ring.random_combination(&spanning, rng)
}

/// Search for a homogeneous minimal reduction: `d` random elements of `I`
/// in degrees whose product times `e(R)` equals `e_0(I)`, accepted once
/// `λ(R/J) = e_0(I)` and a reduction number `≤ cap` is found.
pub fn find_minimal_reduction<F: Field>(setup: &LocalSetup<F>, cap: u32, retries: u32) -> Result<ReductionData<F>> {
    let d = setup.dim();
    let i = setup.i();
    let gens = i.minimal_generators()?;
    let degs: Vec<u32> = gens.iter().filter_map(|g| g.degree()).collect();
    let lo = *degs.iter().min().expect("I is proper and nonzero");
    let hi = *degs.iter().max().expect("nonempty");
    let classical = setup.with_k(None)?;
    let e0 = hilbert_data(&classical)?.g(0);
    let e_ring: u64 = setup
        .context()
        .relations()
        .iter()
        .map(|r| r.degree().unwrap_or(1) as u64)
        .product();
    if e0 <= 0 {
        return Err(AlgebraError::Defect(format!(
            "multiplicity {} of I is not positive",
            e0
        )));
    }
    if !(e0 as u64).is_multiple_of(e_ring) {
        return Err(AlgebraError::Unsupported(format!(
            "I has no homogeneous minimal reduction (e_0 = {} is not a multiple of e(R) = {})",
            e0, e_ring
        )));
    }
    let vectors = degree_vectors(d, lo, hi, e0 as u64 / e_ring);
    if vectors.is_empty() {
        return Err(AlgebraError::Unsupported(
            "I has no homogeneous minimal reduction (no admissible generator degrees)".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(setup.seed());
    let mut attempts = 0;
    for _ in 0..retries.max(1) {
        for delta in &vectors {
            attempts += 1;
            let jg: Vec<Poly<F>> = delta.iter().map(|&t| random_element(i, &gens, t, &mut rng)).collect();
            let j = Ideal::new(setup.context().clone(), jg)?;
            if !j.is_zero_dimensional()? || j.colength()? as i64 != e0 {
                continue;
            }
            match reduction_number(setup, &j, cap) {
                Ok(r) => {
                    let s = k_reduction_number(setup, &j, cap)?;
                    return Ok(ReductionData {
                        j,
                        r,
                        s,
                        verified: true,
                        attempts,
                    });
                }
                Err(AlgebraError::ResourceCap(_)) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    Err(AlgebraError::ResourceCap(format!(
        "no reduction found at cap {} after {} attempts",
        cap, attempts
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_vector_enumeration() {
        assert_eq!(degree_vectors(2, 2, 3, 6), vec![vec![2, 3]]);
        assert_eq!(degree_vectors(3, 2, 2, 8), vec![vec![2, 2, 2]]);
        assert!(degree_vectors(2, 2, 2, 5).is_empty());
    }
}
