use serde::Serialize;

use crate::algebra::Field;
use crate::error::{AlgebraError, Result};
use crate::ideals::Ideal;

use super::hilbert::HilbertData;
use super::ratliff_rush::{ratliff_rush_wrt, rr_colength};
use super::reduction::ReductionData;
use super::setup::LocalSetup;

/// The ρ, ν and (for `d = 2`) v sequences, listed up to `truncation`;
/// every later entry is zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceReport {
    /// `ρ_j = λ(rr_K(I^{j+1}) / J·rr_K(I^j))`
    pub rho: Vec<u64>,
    /// `ν_j = λ(K·I^{j+1} / K·J·I^j)`
    pub nu: Vec<u64>,
    /// `v_0, v_1, ...` (dimension 2 only)
    pub v: Option<Vec<i64>>,
    /// `λ(R/rr_K(I^n))` for `n = 0..=truncation`.
    pub rr_colengths: Vec<u64>,
    pub truncation: u32,
    /// First index of the final run on which `rr_K(I^n) = K·I^n`.
    pub stabilization: u32,
    /// The run was observed over the full persistence window and every closure verified.
    pub verified: bool,
}

impl SequenceReport {
    pub fn rho_sum(&self) -> u64 {
        self.rho.iter().sum()
    }

    /// `Σ_{n≥1} v_n`
    pub fn v_sum(&self) -> Option<i64> {
        self.v.as_ref().map(|v| v.iter().skip(1).sum())
    }

    /// `Σ_{n≥1} (n−1) v_n`
    pub fn v_weighted_sum(&self) -> Option<i64> {
        self.v
            .as_ref()
            .map(|v| v.iter().enumerate().skip(1).map(|(n, x)| (n as i64 - 1) * x).sum())
    }

    /// `λ(R/rr_K(I^0))`
    pub fn rr0_colength(&self) -> u64 {
        self.rr_colengths[0]
    }

    /// `g_1 = Σ_{n≥1} v_n − λ(R/rr_K(I^0))`
    pub fn g1_formula(&self) -> Option<i64> {
        self.v_sum().map(|s| s - self.rr0_colength() as i64)
    }

    /// `g_2 = Σ_{n≥1} (n−1) v_n + λ(R/rr_K(I^0))`
    pub fn g2_formula(&self) -> Option<i64> {
        self.v_weighted_sum().map(|s| s + self.rr0_colength() as i64)
    }

    /// The same combination with the sign of the last term flipped, as it
    /// is sometimes printed; it agrees with `g_2` only when `rr_K(I^0) = R`.
    pub fn g2_formula_flipped(&self) -> Option<i64> {
        self.v_weighted_sum().map(|s| s - self.rr0_colength() as i64)
    }
}

/// Whether `rr_K(I^n) = K·I^n`.
pub fn rr_is_trivial<F: Field>(setup: &LocalSetup<F>, j: &Ideal<F>, n: u32) -> Result<bool> {
    let c = ratliff_rush_wrt(setup, j, n)?;
    let ideal = c.require_verified()?;
    Ok(ideal.colength()? == setup.k_power_colength(n)?)
}

/// Compute the sequences; `upto` extends the listing beyond the automatic truncation.
pub fn rho_nu_sequences<F: Field>(
    setup: &LocalSetup<F>,
    red: &ReductionData<F>,
    e0: i64,
    upto: Option<u32>,
) -> Result<SequenceReport> {
    let j = &red.j;
    let w = setup.options().persistence;
    let limit = red.s + w + setup.options().kmax + 2;
    let mut flags = Vec::new();
    let mut run_start = 0u32;
    let mut truncation = None;
    for m in 0..=limit {
        let f = rr_is_trivial(setup, j, m)?;
        flags.push(f);
        if !f {
            run_start = m + 1;
            continue;
        }
        if m > red.s && m >= run_start + w {
            truncation = Some((m, run_start));
            break;
        }
    }
    let (truncation, stabilization, verified) = match truncation {
        Some((t, s0)) => (t, s0, true),
        None => (limit, run_start.min(limit), false),
    };
    let last = truncation.max(upto.unwrap_or(0));
    let mut rr_colengths = Vec::with_capacity(last as usize + 1);
    for n in 0..=last {
        rr_colengths.push(rr_colength(setup, j, n)?);
    }
    let mut rho = Vec::with_capacity(last as usize);
    let mut nu = Vec::with_capacity(last as usize);
    for jdx in 0..last {
        let rr_j = ratliff_rush_wrt(setup, j, jdx)?;
        let j_rr = j.product(rr_j.require_verified()?)?;
        let lj = j_rr.colength()?;
        let lnext = rr_colengths[jdx as usize + 1];
        if lj < lnext {
            return Err(AlgebraError::Defect(format!(
                "J rr_K(I^{}) is not contained in rr_K(I^{})",
                jdx,
                jdx + 1
            )));
        }
        rho.push(lj - lnext);
        let kji = setup.kj_power(j, jdx)?.colength()?;
        let ki = setup.k_power_colength(jdx + 1)?;
        nu.push(kji - ki);
    }
    if nu.iter().skip(red.s as usize).any(|&x| x != 0) {
        return Err(AlgebraError::Defect("ν_j nonzero beyond the K-reduction number".into()));
    }
    let v = if setup.dim() == 2 {
        let l = |n: usize| rr_colengths[n] as i64;
        let mut v = vec![e0 - l(0)];
        if last >= 1 {
            v.push(e0 - l(1) + 2 * l(0));
        }
        for n in 2..=last as usize {
            v.push(rho[n - 1] as i64);
        }
        Some(v)
    } else {
        None
    };
    Ok(SequenceReport {
        rho,
        nu,
        v,
        rr_colengths,
        truncation: last,
        stabilization,
        verified,
    })
}

/// One row of the generalized fundamental-lemma comparison:
/// `Δ²[P_K(n) − λ(R/rr_K(I^n))]` against `λ(rr_K(I^n)/J·rr_K(I^{n−1}))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaRow {
    pub n: u32,
    pub lhs: i64,
    pub rhs: i64,
}

/// Evaluate the fundamental-lemma identity for `n` in `[2, stabilization + 2]`.
pub fn fundamental_lemma_rows(hd: &HilbertData, seqs: &SequenceReport) -> Vec<LemmaRow> {
    let upper = (seqs.stabilization + 2).min(seqs.truncation).max(2);
    let f = |n: u32| hd.polynomial(n as i64) - seqs.rr_colengths[n as usize] as i64;
    (2..=upper)
        .filter(|&n| (n as usize) < seqs.rr_colengths.len())
        .map(|n| LemmaRow {
            n,
            lhs: f(n) - 2 * f(n - 1) + f(n - 2),
            rhs: seqs.rho[n as usize - 1] as i64,
        })
        .collect()
}
