use serde::Serialize;

use crate::algebra::Field;
use crate::error::{AlgebraError, Result};
use crate::invariants::{LocalSetup, ReductionData};

use super::amm::AMMVerdict;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CmVerdict {
    /// `λ((K·I^n + J·I^{n−1}) / J·I^{n−1})` for `n = 1..=s`.
    pub lengths: Vec<u64>,
    pub cohen_macaulay: bool,
    /// The depth hypothesis on `G(I)` was only probed or failed.
    pub conditional: bool,
}

/// Cohen-Macaulayness of `F_K(I)` for `I` of almost minimal multiplicity
/// with respect to `K`: every length must be 1.
pub fn cm_check<F: Field>(
    setup: &LocalSetup<F>,
    red: &ReductionData<F>,
    amm: &AMMVerdict,
    depth_evidence: bool,
) -> Result<CmVerdict> {
    if !amm.almost_minimal {
        return Err(AlgebraError::Hypothesis(
            "I does not have almost minimal multiplicity with respect to K".into(),
        ));
    }
    let mut lengths = Vec::new();
    for n in 1..=red.s {
        let ji = setup.j_power(&red.j, n - 1)?;
        let sum = setup.k_power(n)?.sum(&ji)?;
        let l = sum.quotient_length(&ji)?;
        if l > 1 {
            return Err(AlgebraError::Defect(format!(
                "λ((KI^{} + JI^{})/JI^{}) = {} exceeds 1",
                n,
                n - 1,
                n - 1,
                l
            )));
        }
        lengths.push(l);
    }
    Ok(CmVerdict {
        cohen_macaulay: lengths.iter().all(|&l| l == 1),
        lengths,
        conditional: !depth_evidence,
    })
}
