use crate::algebra::Field;
use crate::error::{AlgebraError, Result};
use crate::ideals::Ideal;

use super::setup::LocalSetup;

/// `rr_K(I^n)`, the stable value of the chain `L_k = K·I^{n+k} : J^k`.
#[derive(Clone, Debug)]
pub struct RRClosure<F: Field> {
    pub n: u32,
    pub ideal: Ideal<F>,
    /// First `k` with `L_k = L_{k+1}` (the chain index that was accepted).
    pub k_star: u32,
    /// The chain stabilized within `kmax` and passed the colon-descent check.
    pub verified: bool,
    /// Colengths `λ(R/L_k)` for `k = 1..`, as explored.
    pub chain_colengths: Vec<u64>,
}

impl<F: Field> RRClosure<F> {
    /// The closure, or a resource-cap error when the chain never stabilized.
    pub fn require_verified(&self) -> Result<&Ideal<F>> {
        if self.verified {
            Ok(&self.ideal)
        } else {
            Err(AlgebraError::ResourceCap(format!(
                "Ratliff-Rush chain for n = {} did not stabilize verifiably (last L_k: {})",
                self.n,
                self.ideal.format()
            )))
        }
    }
}

/// `rr_K(I^n)` with respect to the reduction `J`.
///
/// The ascending chain `L_k = K·I^{n+k} : J^k` is followed until two
/// consecutive members agree; for `n ≥ 1` the candidate must also satisfy
/// `rr_K(I^n) : J = rr_K(I^{n-1})`, otherwise the chain is followed further.
pub fn ratliff_rush_wrt<F: Field>(setup: &LocalSetup<F>, j: &Ideal<F>, n: u32) -> Result<RRClosure<F>> {
    if let Some(c) = setup.cached_closure(j, n)? {
        return Ok(c);
    }
    let kmax = setup.options().kmax.max(1);
    let previous = if n >= 1 {
        Some(ratliff_rush_wrt(setup, j, n - 1)?)
    } else {
        None
    };
    let mut colengths = Vec::new();
    let mut current = setup.colon_chain(j, n + 1, 1)?;
    colengths.push(current.colength()?);
    let mut k = 1;
    let closure = loop {
        if k >= kmax {
            break RRClosure {
                n,
                ideal: current,
                k_star: k,
                verified: false,
                chain_colengths: colengths,
            };
        }
        let next = setup.colon_chain(j, n + k + 1, k + 1)?;
        if !current.leq(&next)? {
            return Err(AlgebraError::Defect(format!(
                "Ratliff-Rush chain for n = {} is not ascending at k = {}",
                n, k
            )));
        }
        let next_len = next.colength()?;
        colengths.push(next_len);
        if next_len == *colengths.get(colengths.len() - 2).expect("two entries") {
            let descends = match &previous {
                None => true,
                Some(prev) => current.colon(j)?.ideal_eq(&prev.ideal)?,
            };
            if descends {
                let verified = previous.as_ref().is_none_or(|p| p.verified);
                break RRClosure {
                    n,
                    ideal: current,
                    k_star: k,
                    verified,
                    chain_colengths: colengths,
                };
            }
        }
        current = next;
        k += 1;
    };
    setup.store_closure(j, &closure)?;
    Ok(closure)
}

/// `λ(R/rr_K(I^n))`.
pub fn rr_colength<F: Field>(setup: &LocalSetup<F>, j: &Ideal<F>, n: u32) -> Result<u64> {
    let c = ratliff_rush_wrt(setup, j, n)?;
    c.require_verified()?.colength()
}
