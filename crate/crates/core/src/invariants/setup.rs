use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::algebra::Field;
use crate::error::{AlgebraError, Result};
use crate::ideals::{Ideal, RingContext};

use super::ratliff_rush::RRClosure;

/// Tunable limits shared by the invariant computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Options {
    /// Longest Ratliff-Rush chain explored before giving up.
    pub kmax: u32,
    /// Largest reduction number searched for.
    pub reduction_cap: u32,
    /// Random resamples for reductions and superficial elements.
    pub retries: u32,
    /// Extra table values a Hilbert polynomial fit must reproduce.
    pub persistence: u32,
    /// Longest Hilbert function table computed while fitting.
    pub table_cap: u32,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            kmax: 20,
            reduction_cap: 30,
            retries: 8,
            persistence: 3,
            table_cap: 40,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Key {
    Power(u32),
    /// `(K slot, n)`
    KPower(usize, u32),
    JPower(usize, u32),
    KJPower(usize, usize, u32),
    /// `K·I^m : J^k` as `(K slot, J slot, m, k)`
    Colon(usize, usize, u32, u32),
}

/// Tables shared by every setup over the same `I` (differing only in `K`).
struct Memo<F: Field> {
    ideals: HashMap<Key, Ideal<F>>,
    lengths: HashMap<Key, u64>,
    ks: Vec<Ideal<F>>,
    reductions: Vec<Ideal<F>>,
    closures: HashMap<(usize, usize, u32), RRClosure<F>>,
}

impl<F: Field> Memo<F> {
    fn empty() -> Self {
        Memo {
            ideals: HashMap::new(),
            lengths: HashMap::new(),
            ks: Vec::new(),
            reductions: Vec::new(),
            closures: HashMap::new(),
        }
    }
}

fn slot_of<F: Field>(list: &mut Vec<Ideal<F>>, ideal: &Ideal<F>) -> Result<usize> {
    for (idx, other) in list.iter().enumerate() {
        if other.ideal_eq(ideal)? {
            return Ok(idx);
        }
    }
    list.push(ideal.clone());
    Ok(list.len() - 1)
}

/// An m-primary homogeneous ideal `I` inside `K` (`K = R` allowed), with
/// write-once tables of the powers and colons derived from it.
pub struct LocalSetup<F: Field> {
    ctx: Arc<RingContext<F>>,
    i: Ideal<F>,
    k: Ideal<F>,
    k_is_unit: bool,
    k_is_i: bool,
    m: Ideal<F>,
    k_slot: usize,
    unit_slot: usize,
    seed: u64,
    options: Options,
    memo: Arc<Mutex<Memo<F>>>,
}

impl<F: Field> Clone for LocalSetup<F> {
    fn clone(&self) -> Self {
        LocalSetup {
            ctx: self.ctx.clone(),
            i: self.i.clone(),
            k: self.k.clone(),
            k_is_unit: self.k_is_unit,
            k_is_i: self.k_is_i,
            m: self.m.clone(),
            k_slot: self.k_slot,
            unit_slot: self.unit_slot,
            seed: self.seed,
            options: self.options,
            memo: self.memo.clone(),
        }
    }
}

impl<F: Field> std::fmt::Debug for LocalSetup<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LocalSetup")
            .field("ring", &self.ctx)
            .field("I", &self.i)
            .field("K", &self.k)
            .field("seed", &self.seed)
            .finish()
    }
}

impl<F: Field> LocalSetup<F> {
    /// Validate `I` (m-primary) and `K` (`I ⊆ K ⊆ m`, or `None` for `K = R`).
    pub fn new(i: Ideal<F>, k: Option<Ideal<F>>, seed: u64, options: Options) -> Result<Self> {
        if !i.in_maximal() {
            return Err(AlgebraError::Hypothesis(
                "I is not contained in the maximal ideal".into(),
            ));
        }
        if !i.is_zero_dimensional()? {
            return Err(AlgebraError::Hypothesis("I is not m-primary".into()));
        }
        Self::build(i, k, seed, options, Arc::new(Mutex::new(Memo::empty())))
    }

    fn build(i: Ideal<F>, k: Option<Ideal<F>>, seed: u64, options: Options, memo: Arc<Mutex<Memo<F>>>) -> Result<Self> {
        let ctx = i.context().clone();
        let k = match k {
            None => Ideal::unit(ctx.clone()),
            Some(k) => {
                if !k.context().same(&ctx) {
                    return Err(AlgebraError::ContextMismatch);
                }
                if !k.is_unit()? && !k.in_maximal() {
                    return Err(AlgebraError::Hypothesis("K is neither R nor inside m".into()));
                }
                if !i.leq(&k)? {
                    return Err(AlgebraError::Hypothesis("I is not contained in K".into()));
                }
                k
            }
        };
        let k_is_unit = k.is_unit()?;
        let k_is_i = k.ideal_eq(&i)?;
        let (k_slot, unit_slot) = {
            let mut guard = memo.lock().expect("memo lock");
            let unit = slot_of(&mut guard.ks, &Ideal::unit(ctx.clone()))?;
            (slot_of(&mut guard.ks, &k)?, unit)
        };
        Ok(LocalSetup {
            m: Ideal::maximal(ctx.clone()),
            ctx,
            i,
            k,
            k_is_unit,
            k_is_i,
            k_slot,
            unit_slot,
            seed,
            options,
            memo,
        })
    }

    /// Same ring and `I` with a different `K`; tables of powers are shared.
    pub fn with_k(&self, k: Option<Ideal<F>>) -> Result<Self> {
        Self::build(self.i.clone(), k, self.seed, self.options, self.memo.clone())
    }

    /// The same setup with another random seed; tables are shared.
    pub fn with_seed(&self, seed: u64) -> Self {
        LocalSetup { seed, ..self.clone() }
    }

    pub fn context(&self) -> &Arc<RingContext<F>> {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.ctx.dim()
    }

    pub fn i(&self) -> &Ideal<F> {
        &self.i
    }

    pub fn k(&self) -> &Ideal<F> {
        &self.k
    }

    pub fn k_is_unit(&self) -> bool {
        self.k_is_unit
    }

    /// `K = I`, so that `F_K(I)` is the associated graded ring.
    pub fn k_is_i(&self) -> bool {
        self.k_is_i
    }

    /// `K = m`.
    pub fn k_is_maximal(&self) -> Result<bool> {
        self.k.ideal_eq(&self.m)
    }

    pub fn maximal(&self) -> &Ideal<F> {
        &self.m
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn options(&self) -> Options {
        self.options
    }

    pub fn set_options(&mut self, options: Options) {
        self.options = options;
    }

    fn cached(&self, key: Key, compute: impl FnOnce() -> Result<Ideal<F>>) -> Result<Ideal<F>> {
        if let Some(v) = self.memo.lock().expect("memo lock").ideals.get(&key) {
            return Ok(v.clone());
        }
        let v = compute()?;
        v.groebner()?;
        self.memo
            .lock()
            .expect("memo lock")
            .ideals
            .entry(key)
            .or_insert_with(|| v.clone());
        Ok(v)
    }

    fn cached_length(&self, key: Key) -> Result<u64> {
        if let Some(&v) = self.memo.lock().expect("memo lock").lengths.get(&key) {
            return Ok(v);
        }
        let ideal = match key {
            Key::Power(n) => self.power(n)?,
            Key::KPower(_, n) => self.k_power(n)?,
            _ => unreachable!("only power lengths are tabulated"),
        };
        let v = ideal.colength()?;
        self.memo.lock().expect("memo lock").lengths.insert(key, v);
        Ok(v)
    }

    /// `I^n`.
    pub fn power(&self, n: u32) -> Result<Ideal<F>> {
        self.cached(Key::Power(n), || {
            if n == 0 {
                Ok(Ideal::unit(self.ctx.clone()))
            } else {
                self.power(n - 1)?.product(&self.i)
            }
        })
    }

    /// `K·I^n`.
    pub fn k_power(&self, n: u32) -> Result<Ideal<F>> {
        if self.k_is_unit {
            return self.power(n);
        }
        if self.k_is_i {
            return self.power(n + 1);
        }
        self.cached(Key::KPower(self.k_slot, n), || {
            if n == 0 {
                Ok(self.k.clone())
            } else {
                self.k_power(n - 1)?.product(&self.i)
            }
        })
    }

    /// `λ(R/I^n)`.
    pub fn power_colength(&self, n: u32) -> Result<u64> {
        self.cached_length(Key::Power(n))
    }

    /// `λ(R/K·I^n)`.
    pub fn k_power_colength(&self, n: u32) -> Result<u64> {
        if self.k_is_unit {
            return self.power_colength(n);
        }
        if self.k_is_i {
            return self.power_colength(n + 1);
        }
        self.cached_length(Key::KPower(self.k_slot, n))
    }

    /// Index of `j` in the table of reductions seen so far.
    pub(crate) fn reduction_slot(&self, j: &Ideal<F>) -> Result<usize> {
        j.groebner()?;
        slot_of(&mut self.memo.lock().expect("memo lock").reductions, j)
    }

    fn reduction(&self, slot: usize) -> Ideal<F> {
        self.memo.lock().expect("memo lock").reductions[slot].clone()
    }

    /// `J·I^n`.
    pub fn j_power(&self, j: &Ideal<F>, n: u32) -> Result<Ideal<F>> {
        let slot = self.reduction_slot(j)?;
        self.cached(Key::JPower(slot, n), || self.power(n)?.product(&self.reduction(slot)))
    }

    /// `K·J·I^n`.
    pub fn kj_power(&self, j: &Ideal<F>, n: u32) -> Result<Ideal<F>> {
        let slot = self.reduction_slot(j)?;
        self.cached(Key::KJPower(self.k_slot, slot, n), || {
            self.k_power(n)?.product(&self.reduction(slot))
        })
    }

    /// `K·I^m : J^k`, built by iterated colons by `J`.
    pub fn colon_chain(&self, j: &Ideal<F>, m: u32, k: u32) -> Result<Ideal<F>> {
        let slot = self.reduction_slot(j)?;
        if k == 0 {
            return self.k_power(m);
        }
        let (kslot, m_key) = if self.k_is_i {
            (self.unit_slot, m + 1)
        } else {
            (self.k_slot, m)
        };
        self.cached(Key::Colon(kslot, slot, m_key, k), || {
            let prev = self.colon_chain(j, m, k - 1)?;
            prev.colon(&self.reduction(slot))
        })
    }

    pub(crate) fn cached_closure(&self, j: &Ideal<F>, n: u32) -> Result<Option<RRClosure<F>>> {
        let slot = self.reduction_slot(j)?;
        Ok(self
            .memo
            .lock()
            .expect("memo lock")
            .closures
            .get(&(self.k_slot, slot, n))
            .cloned())
    }

    pub(crate) fn store_closure(&self, j: &Ideal<F>, c: &RRClosure<F>) -> Result<()> {
        let slot = self.reduction_slot(j)?;
        self.memo
            .lock()
            .expect("memo lock")
            .closures
            .entry((self.k_slot, slot, c.n))
            .or_insert_with(|| c.clone());
        Ok(())
    }

    /// Map an ideal of this ring onto another context with the same variables.
    pub fn transport(ideal: &Ideal<F>, ctx: &Arc<RingContext<F>>) -> Result<Ideal<F>> {
        Ideal::new(ctx.clone(), ideal.gens().to_vec())
    }
}
