use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::Field;
use crate::error::{AlgebraError, Result};

use super::setup::LocalSetup;

/// A table of `H_K(I, n) = λ(R/K·I^n)` with its Hilbert polynomial
/// `Σ (-1)^i g_i C(n+d-1-i, d-i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertData {
    pub values: Vec<u64>,
    pub d: usize,
    /// `g_0..g_d` (the `e_i` when `K = R`).
    pub coefficients: Vec<i64>,
    /// `[n1, N]`: the polynomial reproduces every table value in this range.
    pub window: (u32, u32),
    pub persistence: u32,
}

impl HilbertData {
    pub fn g(&self, i: usize) -> i64 {
        self.coefficients[i]
    }

    /// The Hilbert polynomial evaluated at `n`.
    pub fn polynomial(&self, n: i64) -> i64 {
        evaluate(&self.coefficients, self.d, n)
    }

    /// Smallest index from which the function agrees with the polynomial.
    pub fn postulation_start(&self) -> u32 {
        self.window.0
    }
}

/// Generalized binomial coefficient `C(a, b)` for integer `a` and `b ≥ 0`.
pub fn binomial(a: i64, b: u32) -> i64 {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for t in 0..b as i64 {
        num *= a - t;
        den *= t + 1;
    }
    (num / den).to_i64().expect("binomial fits in i64")
}

fn basis(d: usize, i: usize, n: i64) -> i64 {
    binomial(n + d as i64 - 1 - i as i64, (d - i) as u32)
}

fn evaluate(g: &[i64], d: usize, n: i64) -> i64 {
    (0..=d)
        .map(|i| {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            sign * g[i] * basis(d, i, n)
        })
        .sum()
}

/// Coefficients of the degree-`d` polynomial through `(n1 + j, values[n1 + j])`, `j = 0..=d`.
fn interpolate(values: &[u64], d: usize, n1: usize) -> Result<Vec<i64>> {
    let size = d + 1;
    let mut rows: Vec<Vec<BigRational>> = (0..size)
        .map(|j| {
            let n = (n1 + j) as i64;
            let mut row: Vec<BigRational> = (0..=d)
                .map(|i| {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    BigRational::from_integer(BigInt::from(sign * basis(d, i, n)))
                })
                .collect();
            row.push(BigRational::from_integer(BigInt::from(values[n1 + j])));
            row
        })
        .collect();
    for col in 0..size {
        let pivot = (col..size)
            .find(|&r| !rows[r][col].is_zero())
            .ok_or_else(|| AlgebraError::Defect("singular interpolation system".into()))?;
        rows.swap(col, pivot);
        let inv = BigRational::one() / rows[col][col].clone();
        for x in rows[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..size {
            if r != col && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                let pivot_row = rows[col].clone();
                for (x, p) in rows[r].iter_mut().zip(pivot_row.iter()) {
                    *x = &*x - &factor * p;
                }
            }
        }
    }
    rows.iter()
        .map(|row| {
            let v = &row[size];
            if !v.is_integer() {
                return Err(AlgebraError::Defect(format!("non-integral Hilbert coefficient {}", v)));
            }
            v.to_integer()
                .to_i64()
                .filter(|x| x.abs() < i64::MAX / 4)
                .ok_or_else(|| AlgebraError::ResourceCap("Hilbert coefficient overflow".into()))
        })
        .collect()
}

/// Fit the Hilbert polynomial of degree `d` to a table: the smallest `n1`
/// whose interpolant reproduces every later value, with at least `w` values
/// beyond the `d + 1` interpolation points.
pub fn fit_hilbert_polynomial(values: &[u64], d: usize, w: u32) -> Result<HilbertData> {
    let w = w as usize;
    if values.len() < d + 1 + w {
        return Err(AlgebraError::ResourceCap(format!(
            "Hilbert table of length {} is too short to fit a degree-{} polynomial with persistence {}",
            values.len(),
            d,
            w
        )));
    }
    let last = values.len() - 1;
    let mut found = None;
    // scan from the end: the window must extend back from the last value
    for n1 in (0..=last - d - w).rev() {
        let g = interpolate(values, d, n1)?;
        let ok = (n1..=last).all(|n| evaluate(&g, d, n as i64) == values[n] as i64);
        if ok {
            found = Some((n1, g));
        } else if found.is_some() {
            break;
        }
    }
    match found {
        Some((n1, g)) => Ok(HilbertData {
            values: values.to_vec(),
            d,
            coefficients: g,
            window: (n1 as u32, last as u32),
            persistence: w as u32,
        }),
        None => Err(AlgebraError::ResourceCap(
            "Hilbert function not yet polynomial on the table".into(),
        )),
    }
}

/// `H_K(I, n) = λ(R/K·I^n)`; for `K = R` and `n = 0` this is 0.
pub fn hilbert_function<F: Field>(setup: &LocalSetup<F>, n: u32) -> Result<u64> {
    setup.k_power_colength(n)
}

/// Tabulate `H_K(I, ·)` until the fit persists, extending on demand up to the table cap.
pub fn hilbert_data<F: Field>(setup: &LocalSetup<F>) -> Result<HilbertData> {
    let d = setup.dim();
    let opts = setup.options();
    let mut values = Vec::new();
    let mut len = d + 1 + opts.persistence as usize + 1;
    loop {
        while values.len() < len {
            values.push(hilbert_function(setup, values.len() as u32)?);
        }
        match fit_hilbert_polynomial(&values, d, opts.persistence) {
            Ok(h) => return Ok(h),
            Err(AlgebraError::ResourceCap(_)) if (len as u32) < opts.table_cap => len += 1,
            Err(AlgebraError::ResourceCap(msg)) => {
                return Err(AlgebraError::ResourceCap(format!(
                    "{} (table cap {})",
                    msg, opts.table_cap
                )))
            }
            Err(e) => return Err(e),
        }
    }
}
