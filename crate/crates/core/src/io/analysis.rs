use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{Field, FieldKind, Poly, PrimeField, Rationals};
use crate::error::{AlgebraError, Result};
use crate::fibercone::{
    amm_check, audit_bounds, cm_check, depth_report, laddered_one_check, series, AMMVerdict, BoundAudit, CmVerdict,
    DepthReport, SeriesReport,
};
use crate::ideals::{Ideal, RingContext};
use crate::invariants::{
    find_minimal_reduction, fundamental_lemma_rows, hilbert_data, hilbert_function, image_in, k_reduction_number,
    quotient_by_element, ratliff_rush_wrt, reduction_data, reduction_number, rho_nu_sequences, superficial_candidate,
    HilbertData, LemmaRow, LocalSetup, Options, ReductionData, SequenceReport,
};

use super::dsl::{map_poly, IdealValue, InputDocument};

/// What to compute; `Analyze` runs everything applicable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Analyze,
    Gb,
    Rr,
    Rednum,
    Hilbert,
    Series,
    Bounds,
    Depth,
    Cm,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Analyze,
        Command::Gb,
        Command::Rr,
        Command::Rednum,
        Command::Hilbert,
        Command::Series,
        Command::Bounds,
        Command::Depth,
        Command::Cm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Gb => "gb",
            Command::Rr => "rr",
            Command::Rednum => "rednum",
            Command::Hilbert => "hilbert",
            Command::Series => "series",
            Command::Bounds => "bounds",
            Command::Depth => "depth",
            Command::Cm => "cm",
        }
    }

    pub fn from_name(name: &str) -> Option<Command> {
        Command::ALL.iter().copied().find(|c| c.name() == name)
    }
}

/// Command-line parameters that override document options.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub seed: Option<u64>,
    pub trunc: Option<u32>,
    pub n: Option<u32>,
    pub upto: Option<u32>,
}

pub const DEFAULT_SEED: u64 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingSummary {
    pub field: FieldKind,
    pub vars: Vec<String>,
    pub relations: Vec<String>,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionSummary {
    pub generators: Vec<String>,
    pub r: u32,
    pub s: u32,
    pub verified: bool,
    pub attempts: u32,
    /// `J` was sampled rather than given.
    pub searched: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureSummary {
    pub n: u32,
    pub generators: Vec<String>,
    pub k_star: u32,
    pub verified: bool,
    pub chain_colengths: Vec<u64>,
    /// `λ(R/rr_K(I^n))`
    pub colength: u64,
    /// `λ(R/K·I^n)`
    pub k_power_colength: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GbSummary {
    pub i: Vec<String>,
    pub j: Option<Vec<String>>,
    pub k: Option<Vec<String>>,
}

/// The coefficient identities and structural checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Identities {
    /// `g_0(K) = e_0`
    pub g0_matches_e0: bool,
    /// `(fitted, Σ v_n)` for `K = R`, `d = 2`.
    pub e1: Option<(i64, i64)>,
    /// `(fitted, Σ (n−1) v_n)` for `K = R`, `d = 2`.
    pub e2: Option<(i64, i64)>,
    /// `(fitted, Σ v_n − λ(R/rr_K(I^0)))`, `d = 2`.
    pub g1: Option<(i64, i64)>,
    /// `(fitted, Σ (n−1) v_n + λ(R/rr_K(I^0)))`, `d = 2`.
    pub g2: Option<(i64, i64)>,
    /// `Σ (n−1) v_n − λ(R/rr_K(I^0))`, the variant with the opposite sign.
    pub g2_flipped: Option<i64>,
    pub lemma_rows: Vec<LemmaRow>,
    pub classical_lemma_rows: Vec<LemmaRow>,
    /// `rr_K(I^n) : J = rr_K(I^{n−1})` for `n = 1..=truncation`.
    pub descent: bool,
    /// `(λ(J/KJ), d·λ(R/K))`
    pub regular_sequence_lemma: (u64, u64),
}

impl Identities {
    /// Pairs that disagree, by name.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.g0_matches_e0 {
            out.push("g0".to_string());
        }
        for (name, pair) in [("e1", self.e1), ("e2", self.e2), ("g1", self.g1), ("g2", self.g2)] {
            if let Some((a, b)) = pair {
                if a != b {
                    out.push(format!("{}: fit {} vs formula {}", name, a, b));
                }
            }
        }
        for row in self.lemma_rows.iter().chain(&self.classical_lemma_rows) {
            if row.lhs != row.rhs {
                out.push(format!(
                    "fundamental lemma at n = {}: {} vs {}",
                    row.n, row.lhs, row.rhs
                ));
            }
        }
        if !self.descent {
            out.push("colon descent".into());
        }
        if self.regular_sequence_lemma.0 != self.regular_sequence_lemma.1 {
            out.push(format!(
                "λ(J/KJ) = {} but d·λ(R/K) = {}",
                self.regular_sequence_lemma.0, self.regular_sequence_lemma.1
            ));
        }
        out
    }
}

/// Reduction numbers before and after dividing out a superficial element of `J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientCheck {
    pub element: String,
    /// The colon checks passed on the window.
    pub verified: bool,
    pub window: u32,
    pub r: (u32, u32),
    pub s: (u32, u32),
}

/// Everything computed for one document; absent parts are `None`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Analysis {
    pub command: Command,
    pub seed: u64,
    pub ring: RingSummary,
    pub k_kind: String,
    pub gb: Option<GbSummary>,
    pub reduction: Option<ReductionSummary>,
    pub classical_hilbert: Option<HilbertData>,
    pub hilbert: Option<HilbertData>,
    /// `λ(R/K·I^n)` for `n = 0..=upto` when requested.
    pub hilbert_table: Option<Vec<u64>>,
    pub closures: Option<Vec<ClosureSummary>>,
    pub sequences: Option<SequenceReport>,
    pub classical_sequences: Option<SequenceReport>,
    pub identities: Option<Identities>,
    pub amm: Option<AMMVerdict>,
    pub ladder: Option<Vec<u64>>,
    pub bounds: Option<BoundAudit>,
    pub classical_bounds: Option<BoundAudit>,
    pub depth: Option<DepthReport>,
    pub series: Option<SeriesReport>,
    pub cm: Option<CmVerdict>,
    pub quotient: Option<QuotientCheck>,
    pub notes: Vec<String>,
}

/// Resolved option values of a document.
pub fn document_options(doc: &InputDocument) -> Options {
    let mut o = Options::default();
    let get = |k: &str, d: u32| doc.option(k).map_or(d, |v| v.clamp(0, u32::MAX as i64) as u32);
    o.kmax = get("kmax", o.kmax);
    o.reduction_cap = get("reduction_cap", o.reduction_cap);
    o.retries = get("retries", o.retries);
    o.persistence = get("persistence", o.persistence);
    o.table_cap = get("table_cap", o.table_cap);
    o
}

fn resolve_seed(doc: &InputDocument, flags: &Flags) -> u64 {
    flags
        .seed
        .or_else(|| doc.option("seed").map(|s| s as u64))
        .unwrap_or(DEFAULT_SEED)
}

/// Run `command` on the document over its declared field.
pub fn analyze_document(doc: &InputDocument, command: Command, flags: &Flags) -> Result<Analysis> {
    match doc.ring.field {
        FieldKind::Rationals => Session::open(Rationals, doc, flags)?.run(command, flags),
        FieldKind::Prime { p } => Session::open(PrimeField::new(p)?, doc, flags)?.run(command, flags),
    }
}

struct Session<F: Field> {
    ctx: Arc<RingContext<F>>,
    setup: LocalSetup<F>,
    given_j: Option<Ideal<F>>,
    k_given: bool,
    seed: u64,
    notes: Vec<String>,
}

fn fmt_gens<F: Field>(ideal: &Ideal<F>) -> Vec<String> {
    ideal.gens().iter().map(|g| ideal.ring().format(g)).collect()
}

fn fmt_polys<F: Field>(ring: &crate::algebra::PolyRing<F>, polys: &[Poly<F>]) -> Vec<String> {
    polys.iter().map(|g| ring.format(g)).collect()
}

impl<F: Field> Session<F> {
    fn open(field: F, doc: &InputDocument, flags: &Flags) -> Result<Self> {
        let qring = doc.rational_ring();
        let probe = crate::algebra::PolyRing::new(field.clone(), doc.ring.vars.clone(), Default::default())?;
        let rels = doc
            .ring
            .relations
            .iter()
            .map(|r| map_poly(&probe, r))
            .collect::<Result<Vec<_>>>()?;
        let ctx = RingContext::new(field, doc.ring.vars.clone(), rels)?;
        let ideal = |name: &str| -> Result<Option<Ideal<F>>> {
            match doc.ideal(name) {
                None => Ok(None),
                Some(IdealValue::MaxIdeal) => Ok(Some(Ideal::maximal(ctx.clone()))),
                Some(IdealValue::Generators(gens)) => {
                    let mapped = gens
                        .iter()
                        .map(|g| map_poly(ctx.ring(), g))
                        .collect::<Result<Vec<_>>>()?;
                    for (g, q) in mapped.iter().zip(gens) {
                        if !g.is_homogeneous() {
                            return Err(AlgebraError::Hypothesis(format!(
                                "generator {} of {} is not homogeneous",
                                qring.format(q),
                                name
                            )));
                        }
                    }
                    Ok(Some(Ideal::new(ctx.clone(), mapped)?))
                }
            }
        };
        let i = ideal("I")?.ok_or_else(|| AlgebraError::Hypothesis("the document declares no ideal I".into()))?;
        let k = ideal("K")?;
        let j = ideal("J")?;
        let seed = resolve_seed(doc, flags);
        let k_given = k.is_some();
        let setup = LocalSetup::new(i, k, seed, document_options(doc))?;
        Ok(Session {
            ctx,
            setup,
            given_j: j,
            k_given,
            seed,
            notes: Vec::new(),
        })
    }

    fn k_kind(&self) -> Result<String> {
        let s = &self.setup;
        Ok(if !self.k_given || s.k_is_unit() {
            "R".into()
        } else if s.k_is_maximal()? {
            "m".into()
        } else if s.k_is_i() {
            "I".into()
        } else {
            "other".into()
        })
    }

    fn reduction(&mut self) -> Result<(ReductionData<F>, bool)> {
        let cap = self.setup.options().reduction_cap;
        match &self.given_j {
            Some(j) => Ok((reduction_data(&self.setup, j.clone(), cap)?, false)),
            None => Ok((
                find_minimal_reduction(&self.setup, cap, self.setup.options().retries)?,
                true,
            )),
        }
    }

    fn empty(&self, command: Command) -> Result<Analysis> {
        Ok(Analysis {
            command,
            seed: self.seed,
            ring: RingSummary {
                field: self.ctx.field_kind(),
                vars: self.ctx.names().to_vec(),
                relations: fmt_polys(self.ctx.ring(), self.ctx.relations()),
                dim: self.ctx.dim(),
            },
            k_kind: self.k_kind()?,
            gb: None,
            reduction: None,
            classical_hilbert: None,
            hilbert: None,
            hilbert_table: None,
            closures: None,
            sequences: None,
            classical_sequences: None,
            identities: None,
            amm: None,
            ladder: None,
            bounds: None,
            classical_bounds: None,
            depth: None,
            series: None,
            cm: None,
            quotient: None,
            notes: Vec::new(),
        })
    }

    fn run(mut self, command: Command, flags: &Flags) -> Result<Analysis> {
        let mut out = self.empty(command)?;
        if command == Command::Gb {
            let basis = |i: &Ideal<F>| -> Result<Vec<String>> { Ok(fmt_polys(i.ring(), i.groebner()?.polys())) };
            out.gb = Some(GbSummary {
                i: basis(self.setup.i())?,
                j: self.given_j.as_ref().map(basis).transpose()?,
                k: if self.k_given {
                    Some(basis(self.setup.k())?)
                } else {
                    None
                },
            });
            return Ok(out);
        }
        if command == Command::Hilbert {
            let s = &self.setup;
            out.classical_hilbert = Some(hilbert_data(&s.with_k(None)?)?);
            if !s.k_is_unit() {
                out.hilbert = Some(hilbert_data(s)?);
            }
            if let Some(upto) = flags.upto {
                out.hilbert_table = Some((0..=upto).map(|n| hilbert_function(s, n)).collect::<Result<_>>()?);
            }
            return Ok(out);
        }

        let (red, searched) = self.reduction()?;
        out.reduction = Some(ReductionSummary {
            generators: fmt_gens(&red.j),
            r: red.r,
            s: red.s,
            verified: red.verified,
            attempts: red.attempts,
            searched,
        });
        if command == Command::Rednum {
            return Ok(out);
        }
        let s = self.setup.clone();
        if command == Command::Rr {
            let upto = flags.n.unwrap_or(1);
            let mut closures = Vec::new();
            for n in 0..=upto {
                let c = ratliff_rush_wrt(&s, &red.j, n)?;
                closures.push(ClosureSummary {
                    n,
                    generators: fmt_polys(c.ideal.ring(), &c.ideal.basis_generators()?),
                    k_star: c.k_star,
                    verified: c.verified,
                    chain_colengths: c.chain_colengths.clone(),
                    colength: c.ideal.colength()?,
                    k_power_colength: s.k_power_colength(n)?,
                });
            }
            out.closures = Some(closures);
            return Ok(out);
        }

        let classical = s.with_k(None)?;
        let chd = hilbert_data(&classical)?;
        let e0 = chd.g(0);
        let hd = if s.k_is_unit() { chd.clone() } else { hilbert_data(&s)? };
        let d = s.dim();
        let wants_sequences = matches!(command, Command::Analyze | Command::Bounds | Command::Depth);
        let seqs = if wants_sequences {
            Some(rho_nu_sequences(&s, &red, e0, None)?)
        } else {
            None
        };
        let classical_red = ReductionData {
            j: red.j.clone(),
            r: red.r,
            s: red.r,
            verified: red.verified,
            attempts: red.attempts,
        };
        let classical_seqs = if command == Command::Analyze && !s.k_is_unit() {
            Some(rho_nu_sequences(&classical, &classical_red, e0, None)?)
        } else {
            seqs.clone().filter(|_| s.k_is_unit())
        };
        out.classical_hilbert = Some(chd.clone());
        out.hilbert = Some(hd.clone());

        let needs_amm = matches!(command, Command::Analyze | Command::Series | Command::Cm);
        let amm = if needs_amm {
            let second = if command == Command::Analyze && searched {
                let alt = s.with_seed(self.seed.wrapping_add(0x9e37_79b9));
                match find_minimal_reduction(&alt, s.options().reduction_cap, s.options().retries) {
                    Ok(r2) => Some(r2),
                    Err(AlgebraError::ResourceCap(msg)) => {
                        self.notes.push(format!("second reduction not found: {}", msg));
                        None
                    }
                    Err(e) => return Err(e),
                }
            } else {
                None
            };
            Some(amm_check(&s, &red, e0, second.as_ref())?)
        } else {
            None
        };

        if command == Command::Analyze {
            let seqs = seqs.as_ref().expect("computed for analyze");
            let cseqs = classical_seqs.as_ref().expect("computed for analyze");
            let closures_ok = seqs.verified && cseqs.verified;
            let mut descent = true;
            for n in 1..=seqs.truncation {
                let cur = ratliff_rush_wrt(&s, &red.j, n)?;
                let prev = ratliff_rush_wrt(&s, &red.j, n - 1)?;
                descent &= cur.ideal.colon(&red.j)?.ideal_eq(&prev.ideal)?;
            }
            let jk = s.kj_power(&red.j, 0)?;
            let rsl = (red.j.quotient_length(&jk)?, d as u64 * s.k_power_colength(0)?);
            let (e1, e2, g1, g2, flipped, rows, crows) = if d == 2 {
                (
                    Some((chd.g(1), cseqs.v_sum().expect("d = 2"))),
                    Some((chd.g(2), cseqs.v_weighted_sum().expect("d = 2"))),
                    Some((hd.g(1), seqs.g1_formula().expect("d = 2"))),
                    Some((hd.g(2), seqs.g2_formula().expect("d = 2"))),
                    seqs.g2_formula_flipped(),
                    fundamental_lemma_rows(&hd, seqs),
                    fundamental_lemma_rows(&chd, cseqs),
                )
            } else {
                (None, None, None, None, None, Vec::new(), Vec::new())
            };
            let ids = Identities {
                g0_matches_e0: hd.g(0) == e0,
                e1,
                e2,
                g1,
                g2,
                g2_flipped: flipped,
                lemma_rows: rows,
                classical_lemma_rows: crows,
                descent,
                regular_sequence_lemma: rsl,
            };
            let failures = ids.failures();
            if !failures.is_empty() && closures_ok && red.verified {
                return Err(AlgebraError::Defect(format!(
                    "identities fail: {}",
                    failures.join("; ")
                )));
            }
            if !closures_ok {
                self.notes
                    .push("some Ratliff-Rush closures are unverified; identities not enforced".into());
            }
            out.identities = Some(ids);
        }

        if matches!(command, Command::Analyze | Command::Bounds) {
            let seqs = seqs.as_ref().expect("computed");
            out.bounds = Some(audit_bounds(&s, &red, &hd, seqs)?);
            if !s.k_is_unit() {
                if let Some(cseqs) = &classical_seqs {
                    out.classical_bounds = Some(audit_bounds(&classical, &classical_red, &chd, cseqs)?);
                }
            }
        }

        if let Some(amm) = &amm {
            if amm.almost_minimal && command == Command::Analyze {
                out.ladder = Some(laddered_one_check(&s, &red, amm)?);
            }
        }

        if matches!(command, Command::Analyze | Command::Depth) {
            let upto = seqs.as_ref().map_or(red.s + s.options().persistence, |q| q.truncation);
            out.depth = Some(depth_report(&s, &red, upto)?);
        }

        if matches!(command, Command::Analyze | Command::Series | Command::Cm) {
            let amm = amm.as_ref().expect("computed");
            let rep = series(&s, &red, amm, flags.trunc)?;
            if command == Command::Cm || (command == Command::Analyze && amm.almost_minimal) {
                if amm.almost_minimal {
                    let evidence = d == 1 || (d == 2 && rep.rr_probe);
                    let cm = cm_check(&s, &red, amm, evidence)?;
                    if let Some(depth) = &out.depth {
                        if let Some(exact) = depth.exact_fiber_depth {
                            if cm.cohen_macaulay && !cm.conditional && exact as usize != d {
                                return Err(AlgebraError::Defect(format!(
                                    "criterion says F(I) is Cohen-Macaulay but the parameter search gives depth {}",
                                    exact
                                )));
                            }
                        }
                    }
                    out.cm = Some(cm);
                } else {
                    self.notes
                        .push("I does not have almost minimal multiplicity with respect to K".into());
                }
            }
            if command != Command::Cm {
                out.series = Some(rep);
            }
        }

        if command == Command::Analyze && d >= 2 {
            out.quotient = self.quotient_check(&red)?;
        }

        out.amm = amm;
        out.sequences = seqs;
        out.classical_sequences = if s.k_is_unit() { None } else { classical_seqs };
        out.notes = std::mem::take(&mut self.notes);
        Ok(out)
    }

    /// Divide out a superficial element of `J` and recompute `r` and `s`.
    fn quotient_check(&mut self, red: &ReductionData<F>) -> Result<Option<QuotientCheck>> {
        let s = &self.setup;
        let window = red.r.max(red.s) + s.options().persistence;
        let rec = superficial_candidate(s, red.j.gens(), window, self.seed ^ 0x5eed)?;
        if !rec.verified {
            self.notes
                .push("no element of J passed the superficial colon checks".into());
            return Ok(None);
        }
        let q = quotient_by_element(s, &rec.x)?;
        let jq = image_in(&red.j, &q)?;
        let cap = s.options().reduction_cap;
        let r_after = reduction_number(&q, &jq, cap)?;
        let s_after = k_reduction_number(&q, &jq, cap)?;
        let check = QuotientCheck {
            element: s.i().ring().format(&rec.x),
            verified: rec.verified,
            window,
            r: (red.r, r_after),
            s: (red.s, s_after),
        };
        if check.r.0 != check.r.1 || check.s.0 != check.s.1 {
            return Err(AlgebraError::Defect(format!(
                "reduction numbers change modulo the superficial element {}: r {:?}, s {:?}",
                check.element, check.r, check.s
            )));
        }
        Ok(Some(check))
    }
}
