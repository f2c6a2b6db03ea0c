use serde::Serialize;

use crate::algebra::Field;
use crate::error::{AlgebraError, Result};
use crate::invariants::{binomial, rr_is_trivial, LocalSetup, ReductionData};

use super::amm::AMMVerdict;

/// Coefficients of `numerator / (1−t)^e` through degree `n_max`.
pub fn expand_rational(numerator: &[i64], e: u32, n_max: u32) -> Vec<i64> {
    (0..=n_max as i64)
        .map(|n| {
            numerator
                .iter()
                .enumerate()
                .filter(|(i, _)| *i as i64 <= n)
                .map(|(i, a)| a * binomial(n - i as i64 + e as i64 - 1, e.saturating_sub(1)))
                .sum()
        })
        .collect()
}

/// `a + b·t + t^k` as a coefficient list.
fn numerator(a: i64, b: i64, k: u32) -> Vec<i64> {
    let mut v = vec![0; (k as usize).max(1) + 1];
    v[0] += a;
    v[1] += b;
    v[k as usize] += 1;
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedForm {
    pub numerator: Vec<i64>,
    pub denominator_exponent: u32,
    pub coefficients: Vec<i64>,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesReport {
    pub n_max: u32,
    /// `λ(R/K·I^n)` for `n = 0..=n_max`.
    pub hilbert: Vec<u64>,
    /// `λ(I^n/K·I^n)` for `n = 0..=n_max`.
    pub fiber: Vec<u64>,
    pub almost_minimal: bool,
    /// `rr(I^n) = I^n` for every `n` probed (vacuous for `d = 1`).
    pub rr_probe: bool,
    pub probe_window: u32,
    /// The closed form is proved on this instance (up to the probe).
    pub hypotheses_verified: bool,
    pub closed_form: Option<ClosedForm>,
    /// `Σ λ(I^n/I^{n+1}) t^n` against its closed form, when `λ(I²/JI) = 1`.
    pub graded: Option<ClosedForm>,
}

/// The classical probe `rr(I^n) = I^n` for `n = 1..=window`.
pub fn rr_probe<F: Field>(setup: &LocalSetup<F>, red: &ReductionData<F>, window: u32) -> Result<bool> {
    let classical = setup.with_k(None)?;
    for n in 1..=window {
        if !rr_is_trivial(&classical, &red.j, n)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Truncated Hilbert series of `F_K(I)` compared with
/// `[λ(R/K) + (e_0−1−λ(R/K))t + t^{s+1}] / (1−t)^{d+1}`. A mismatch under
/// verified hypotheses is a defect.
pub fn series<F: Field>(
    setup: &LocalSetup<F>,
    red: &ReductionData<F>,
    amm: &AMMVerdict,
    n_max: Option<u32>,
) -> Result<SeriesReport> {
    let d = setup.dim() as u32;
    let s = red.s;
    let n_max = n_max.unwrap_or(s + d + 5);
    let mut hilbert = Vec::new();
    let mut fiber = Vec::new();
    for n in 0..=n_max {
        let h = setup.k_power_colength(n)?;
        hilbert.push(h);
        fiber.push(h - setup.power_colength(n)?);
    }
    let e0 = amm.e0;
    let probe_window = red.r.max(s) + setup.options().persistence;
    let rr_ok = if d == 1 {
        true
    } else {
        rr_probe(setup, red, probe_window)?
    };
    let hypotheses_verified = amm.almost_minimal && red.verified && (d == 1 || (d == 2 && rr_ok));
    let closed_form = if amm.almost_minimal {
        let rk = setup.k_power_colength(0)? as i64;
        let num = numerator(rk, e0 - 1 - rk, s + 1);
        let coefficients = expand_rational(&num, d + 1, n_max);
        let matches = coefficients.iter().zip(&hilbert).all(|(a, &b)| *a == b as i64);
        if hypotheses_verified && !matches {
            return Err(AlgebraError::Defect(format!(
                "Hilbert series of F_K(I) differs from its closed form: {:?} vs {:?}",
                hilbert, coefficients
            )));
        }
        Some(ClosedForm {
            numerator: num,
            denominator_exponent: d + 1,
            coefficients,
            matches,
        })
    } else {
        None
    };
    let i2_over_ji = setup.power(2)?.quotient_length(&setup.j_power(&red.j, 1)?)?;
    let graded = if i2_over_ji == 1 && red.verified {
        let colength = setup.power_colength(1)? as i64;
        let num = numerator(colength, e0 - 1 - colength, red.r);
        let coefficients = expand_rational(&num, d, n_max);
        let mut matches = true;
        for n in 0..=n_max {
            let g = setup.power_colength(n + 1)? - setup.power_colength(n)?;
            matches &= coefficients[n as usize] == g as i64;
        }
        if !matches {
            return Err(AlgebraError::Defect(
                "Hilbert series of G(I) differs from its closed form although λ(I²/JI) = 1".into(),
            ));
        }
        Some(ClosedForm {
            numerator: num,
            denominator_exponent: d,
            coefficients,
            matches,
        })
    } else {
        None
    };
    Ok(SeriesReport {
        n_max,
        hilbert,
        fiber,
        almost_minimal: amm.almost_minimal,
        rr_probe: rr_ok,
        probe_window: if d == 1 { 0 } else { probe_window },
        hypotheses_verified,
        closed_form,
        graded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_expansion() {
        // 1/(1-t)^2 = Σ (n+1) t^n
        assert_eq!(expand_rational(&[1], 2, 4), vec![1, 2, 3, 4, 5]);
        // (1 + t)/(1 - t) = 1 + 2t + 2t^2 + ...
        assert_eq!(expand_rational(&[1, 1], 1, 3), vec![1, 2, 2, 2]);
        assert_eq!(numerator(2, 3, 1), vec![2, 4]);
        assert_eq!(numerator(1, 0, 3), vec![1, 0, 0, 1]);
    }
}
