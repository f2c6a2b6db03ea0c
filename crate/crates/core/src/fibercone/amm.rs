use serde::Serialize;

use crate::algebra::Field;
use crate::error::{AlgebraError, Result};
use crate::invariants::{LocalSetup, ReductionData};

/// Multiplicity data of `I` relative to `K` and a minimal reduction `J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AMMVerdict {
    /// `λ(KI/KJ)`
    pub k_length: u64,
    pub minimal_multiplicity: bool,
    pub almost_minimal: bool,
    /// `μ(I)`
    pub mu: u64,
    /// `λ(mI/mJ)`
    pub m_length: u64,
    pub e0: i64,
    /// `λ(R/I)`
    pub colength: u64,
    /// `μ(I) + λ(mI/mJ) − (e_0 − λ(R/I) + d)`
    pub mu_residual: i64,
    /// `λ(I/KI) − (e_0 − λ(R/I) + d·λ(R/K) − λ(KI/KJ))`
    pub k_residual: i64,
    /// `λ(KI/KJ)` for an independently sampled reduction, if one was given.
    pub second_k_length: Option<u64>,
}

impl AMMVerdict {
    pub fn j_independent(&self) -> bool {
        self.second_k_length.is_none_or(|l| l == self.k_length)
    }
}

fn k_length<F: Field>(setup: &LocalSetup<F>, red: &ReductionData<F>) -> Result<u64> {
    setup.k_power(1)?.quotient_length(&setup.kj_power(&red.j, 0)?)
}

/// `λ(KI/KJ)` with the `μ` identity and the reduction-independence check.
/// Nonzero residuals are defects.
pub fn amm_check<F: Field>(
    setup: &LocalSetup<F>,
    red: &ReductionData<F>,
    e0: i64,
    second: Option<&ReductionData<F>>,
) -> Result<AMMVerdict> {
    let d = setup.dim() as i64;
    let kl = k_length(setup, red)?;
    let i = setup.i();
    let colength = setup.power_colength(1)?;
    let mu = i.min_generators()?;
    let ms = setup.with_k(Some(setup.maximal().clone()))?;
    let ml = k_length(&ms, red)?;
    let mu_residual = mu as i64 + ml as i64 - (e0 - colength as i64 + d);
    let rk = setup.k_power_colength(0)? as i64;
    let i_over_ki = (setup.k_power_colength(1)? - colength) as i64;
    let k_residual = i_over_ki - (e0 - colength as i64 + d * rk - kl as i64);
    let second_k_length = second.map(|r| k_length(setup, r)).transpose()?;
    let verdict = AMMVerdict {
        k_length: kl,
        minimal_multiplicity: kl == 0,
        almost_minimal: kl == 1,
        mu,
        m_length: ml,
        e0,
        colength,
        mu_residual,
        k_residual,
        second_k_length,
    };
    if red.verified && (mu_residual != 0 || k_residual != 0) {
        return Err(AlgebraError::Defect(format!(
            "multiplicity identity fails: mu residual {}, K residual {}",
            mu_residual, k_residual
        )));
    }
    if !verdict.j_independent() {
        return Err(AlgebraError::Defect(format!(
            "λ(KI/KJ) depends on the reduction: {} vs {:?}",
            kl, second_k_length
        )));
    }
    Ok(verdict)
}

/// `λ(K·I^n / K·J·I^{n−1})` for `n = 1..=s+1`; under almost minimal
/// multiplicity every entry up to `s` must be 1 and the last one 0.
pub fn laddered_one_check<F: Field>(
    setup: &LocalSetup<F>,
    red: &ReductionData<F>,
    verdict: &AMMVerdict,
) -> Result<Vec<u64>> {
    if !verdict.almost_minimal {
        return Err(AlgebraError::Hypothesis(
            "I does not have almost minimal multiplicity with respect to K".into(),
        ));
    }
    let mut out = Vec::new();
    for n in 1..=red.s + 1 {
        let big = setup.k_power(n)?;
        let small = setup.kj_power(&red.j, n - 1)?;
        out.push(big.quotient_length(&small)?);
    }
    let ok = out[..red.s as usize].iter().all(|&l| l == 1) && out[red.s as usize] == 0;
    if !ok {
        return Err(AlgebraError::Defect(format!(
            "λ(KI^n/KJI^(n-1)) for n = 1..{} is {:?}, expected 1 up to s = {}",
            red.s + 1,
            out,
            red.s
        )));
    }
    Ok(out)
}
