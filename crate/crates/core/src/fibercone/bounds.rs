use serde::Serialize;

use crate::algebra::Field;
use crate::error::{AlgebraError, Result};
use crate::invariants::{hilbert_data, k_reduction_number, HilbertData, LocalSetup, ReductionData, SequenceReport};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypothesis {
    pub name: String,
    pub holds: bool,
}

/// One inequality `lhs ≤ rhs` with the hypotheses under which it is proved.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundRecord {
    pub name: String,
    pub hypotheses: Vec<Hypothesis>,
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

impl BoundRecord {
    pub fn hypotheses_verified(&self) -> bool {
        self.hypotheses.iter().all(|h| h.holds)
    }

    pub fn is_violation(&self) -> bool {
        self.hypotheses_verified() && !self.holds
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundAudit {
    pub records: Vec<BoundRecord>,
}

impl BoundAudit {
    pub fn violations(&self) -> impl Iterator<Item = &BoundRecord> {
        self.records.iter().filter(|r| r.is_violation())
    }

    pub fn get(&self, name: &str) -> Option<&BoundRecord> {
        self.records.iter().find(|r| r.name == name)
    }
}

fn hyp(name: &str, holds: bool) -> Hypothesis {
    Hypothesis {
        name: name.to_string(),
        holds,
    }
}

fn record(name: &str, hypotheses: Vec<Hypothesis>, lhs: i64, rhs: i64) -> BoundRecord {
    BoundRecord {
        name: name.to_string(),
        hypotheses,
        lhs,
        rhs,
        holds: lhs <= rhs,
    }
}

/// `KI ∩ J = KJ`.
fn intersection_condition<F: Field>(setup: &LocalSetup<F>, red: &ReductionData<F>) -> Result<bool> {
    let meet = setup.k_power(1)?.intersect(&red.j)?;
    meet.ideal_eq(&setup.kj_power(&red.j, 0)?)
}

/// Evaluate every reduction-number bound on the instance. `hd` and `seqs`
/// belong to the setup's `K`; the classical and `K = m` data are derived here.
/// A bound failing under verified hypotheses is a defect.
pub fn audit_bounds<F: Field>(
    setup: &LocalSetup<F>,
    red: &ReductionData<F>,
    hd: &HilbertData,
    seqs: &SequenceReport,
) -> Result<BoundAudit> {
    let d = setup.dim();
    let cap = setup.options().reduction_cap;
    let is_d2 = hyp("d = 2", d == 2);
    let verified = hyp("reduction and closures verified", red.verified && seqs.verified);
    let cond = intersection_condition(setup, red)?;
    let k_len = setup.k_power(1)?.quotient_length(&setup.kj_power(&red.j, 0)?)? as i64;
    let rk = setup.k_power_colength(0)? as i64;
    let s = red.s as i64;
    let mut records = Vec::new();

    records.push(record(
        "theorem",
        vec![hyp("KI ∩ J = KJ", cond), verified.clone()],
        s,
        seqs.rho_sum() as i64 - k_len + 1,
    ));
    records.push(record(
        "g1",
        vec![is_d2.clone(), hyp("KI ∩ J = KJ", cond), verified.clone()],
        s,
        hd.g(1) - k_len + 1 + rk,
    ));

    let classical = setup.with_k(None)?;
    let chd = hilbert_data(&classical)?;
    let colength = classical.power_colength(1)? as i64;
    let e = |i: usize| if i <= d { chd.g(i) } else { 0 };
    records.push(record(
        "rossi",
        vec![is_d2.clone(), hyp("reduction verified", red.verified)],
        red.r as i64,
        e(1) - e(0) + colength + 1,
    ));

    let ms = setup.with_k(Some(setup.maximal().clone()))?;
    let mhd = hilbert_data(&ms)?;
    let m_cond = intersection_condition(&ms, red)?;
    let s_m = k_reduction_number(&ms, &red.j, cap)? as i64;
    let m_len = ms.k_power(1)?.quotient_length(&ms.kj_power(&red.j, 0)?)? as i64;
    let g1m = if d >= 1 { mhd.g(1) } else { 0 };
    records.push(record(
        "maximal",
        vec![
            is_d2.clone(),
            hyp("mI ∩ J = mJ", m_cond),
            hyp("reduction verified", red.verified),
        ],
        s_m,
        g1m + 2 - m_len,
    ));
    records.push(record(
        "amm_maximal",
        vec![
            is_d2,
            hyp("λ(mI/mJ) = 1", m_len == 1),
            hyp("reduction verified", red.verified),
        ],
        s_m,
        g1m + 1,
    ));

    let audit = BoundAudit { records };
    if let Some(v) = audit.violations().next() {
        return Err(AlgebraError::Defect(format!(
            "bound '{}' violated: {} > {}",
            v.name, v.lhs, v.rhs
        )));
    }
    Ok(audit)
}
