use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::FieldKind;
use crate::error::AlgebraError;

use super::analysis::{analyze_document, Analysis, Command, Flags};
use super::dsl::parse;

/// Which `K` the generated documents declare.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KMode {
    /// `K = m`
    Maximal,
    /// no `K`, so `K = R`
    Unit,
    /// `K = I`
    SameAsI,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusParams {
    /// 1 (a hypersurface in two variables), 2 or 3.
    pub dim: u32,
    pub field: FieldKind,
    /// Generator degree range.
    pub lo: u32,
    pub hi: u32,
    pub count: usize,
    pub seed: u64,
    pub k_mode: KMode,
    /// Documents drawn per instance before it is skipped.
    pub max_attempts: u32,
}

impl CorpusParams {
    pub fn new(dim: u32, count: usize, seed: u64) -> Self {
        CorpusParams {
            dim,
            field: FieldKind::Prime { p: 32003 },
            lo: 2,
            hi: if dim >= 3 { 2 } else { 3 },
            count,
            seed,
            k_mode: KMode::Maximal,
            max_attempts: 6,
        }
    }

    pub fn with_k_mode(mut self, k_mode: KMode) -> Self {
        self.k_mode = k_mode;
        self
    }

    pub fn with_field(mut self, field: FieldKind) -> Self {
        self.field = field;
        self
    }

    pub fn with_degrees(mut self, lo: u32, hi: u32) -> Self {
        self.lo = lo;
        self.hi = hi;
        self
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        if !(1..=3).contains(&self.dim) {
            return Err(AlgebraError::Unsupported(format!(
                "corpus dimension {} (use 1, 2 or 3)",
                self.dim
            )));
        }
        if self.lo == 0 || self.lo > self.hi {
            return Err(AlgebraError::Hypothesis(format!(
                "bad degree range [{}, {}]",
                self.lo, self.hi
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "status")]
pub enum Outcome {
    Analyzed { analysis: Box<Analysis> },
    Skipped { reason: String },
    Defect { message: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub index: usize,
    pub attempts: u32,
    pub equigenerated: bool,
    /// The document text, replayable with `analyze`.
    pub document: String,
    pub outcome: Outcome,
}

impl Instance {
    pub fn analysis(&self) -> Option<&Analysis> {
        match &self.outcome {
            Outcome::Analyzed { analysis } => Some(analysis),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefectDump {
    pub index: usize,
    pub message: String,
    pub document: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Aggregate {
    pub analyzed: usize,
    pub skipped: usize,
    pub equigenerated: usize,
    pub minimal_multiplicity: usize,
    pub almost_minimal: usize,
    pub bound_records_checked: usize,
    pub bound_records_held: usize,
    pub identity_passes: usize,
    pub amm_depth_positive: usize,
    pub amm_sop_certified: usize,
    pub series_checked: usize,
    pub series_matched: usize,
    pub graded_series_checked: usize,
    pub graded_series_matched: usize,
    pub quotient_checks: usize,
    pub skip_reasons: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusRun {
    pub params: CorpusParams,
    pub instances: Vec<Instance>,
    pub aggregate: Aggregate,
    pub defect: Option<DefectDump>,
}

impl CorpusRun {
    /// The aggregate and the defect dump as JSON.
    pub fn summary_json(&self) -> String {
        #[derive(Serialize)]
        struct Summary<'a> {
            params: &'a CorpusParams,
            aggregate: &'a Aggregate,
            defect: &'a Option<DefectDump>,
        }
        serde_json::to_string_pretty(&Summary {
            params: &self.params,
            aggregate: &self.aggregate,
            defect: &self.defect,
        })
        .expect("summaries serialize")
    }
}

const BATCH: usize = 8;

const VARS: [&str; 3] = ["x", "y", "z"];

fn monomial_text(exps: &[u32]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .zip(VARS)
        .filter(|(&e, _)| e > 0)
        .map(|(&e, v)| if e == 1 { v.to_string() } else { format!("{}^{}", v, e) })
        .collect();
    parts.join("*")
}

fn random_exponents(n: usize, t: u32, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let mut e = vec![0u32; n];
    for _ in 0..t {
        e[rng.gen_range(0..n)] += 1;
    }
    e
}

/// A sparse form of degree `t` with small integer coefficients.
fn random_form(n: usize, t: u32, rng: &mut ChaCha8Rng) -> String {
    let terms = rng.gen_range(2..=4);
    let mut picked: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
    for _ in 0..terms {
        let mut c = rng.gen_range(-3i64..=3);
        if c == 0 {
            c = 1;
        }
        picked.insert(random_exponents(n, t, rng), c);
    }
    let mut out = String::new();
    for (e, c) in picked.iter().rev() {
        let m = monomial_text(e);
        match (out.is_empty(), *c) {
            (true, 1) => out.push_str(&m),
            (true, -1) => out.push_str(&format!("-{}", m)),
            (true, c) => out.push_str(&format!("{}*{}", c, m)),
            (false, 1) => out.push_str(&format!("+{}", m)),
            (false, -1) => out.push_str(&format!("-{}", m)),
            (false, c) if c > 0 => out.push_str(&format!("+{}*{}", c, m)),
            (false, c) => out.push_str(&format!("{}*{}", c, m)),
        }
    }
    out
}

/// Draw one document: random forms plus pure powers of every variable.
fn draw_document(params: &CorpusParams, rng: &mut ChaCha8Rng) -> (String, bool) {
    let n = if params.dim == 1 { 2 } else { params.dim as usize };
    let vars = VARS[..n].join(",");
    let relation = if params.dim == 1 {
        let deg = rng.gen_range(2..=3);
        let mut f = random_form(n, deg, rng);
        while !f.contains('+') && !f[1..].contains('-') {
            f = random_form(n, deg, rng);
        }
        format!(" / ({})", f)
    } else {
        String::new()
    };
    let equigenerated = params.lo == params.hi || rng.gen_bool(0.5);
    let t = rng.gen_range(params.lo..=params.hi);
    let mut gens = Vec::new();
    for v in &VARS[..n] {
        let p = if equigenerated { t } else { rng.gen_range(t..=params.hi) };
        gens.push(format!("{}^{}", v, p));
    }
    for _ in 0..rng.gen_range(1..=n) {
        let deg = if equigenerated {
            t
        } else {
            rng.gen_range(params.lo..=params.hi)
        };
        gens.push(random_form(n, deg, rng));
    }
    let ideal = gens.join(", ");
    let k = match params.k_mode {
        KMode::Maximal => "\nideal K = maxideal;".to_string(),
        KMode::Unit => String::new(),
        KMode::SameAsI => format!("\nideal K = {};", ideal),
    };
    let seed: u32 = rng.gen();
    let text = format!(
        "ring R = {}[{}]{};\nideal I = {};{}\noption seed = {};",
        params.field, vars, relation, ideal, k, seed
    );
    (text, equigenerated)
}

fn instance_rng(params: &CorpusParams, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(index as u64);
    rng
}

/// The first document drawn for instance `index`.
pub fn generate_document(params: &CorpusParams, index: usize) -> String {
    draw_document(params, &mut instance_rng(params, index)).0
}

fn run_instance(params: &CorpusParams, index: usize) -> Instance {
    let mut rng = instance_rng(params, index);
    let mut last = None;
    for attempt in 1..=params.max_attempts.max(1) {
        let (text, equigenerated) = draw_document(params, &mut rng);
        let doc = match parse(&text) {
            Ok(d) => d,
            Err(e) => {
                return Instance {
                    index,
                    attempts: attempt,
                    equigenerated,
                    document: text,
                    outcome: Outcome::Defect {
                        message: format!("generated document does not parse: {}", e),
                    },
                }
            }
        };
        let document = doc.to_string();
        let outcome = match analyze_document(&doc, Command::Analyze, &Flags::default()) {
            Ok(a) => Outcome::Analyzed { analysis: Box::new(a) },
            Err(AlgebraError::Defect(m)) => Outcome::Defect { message: m },
            Err(e) => Outcome::Skipped { reason: e.to_string() },
        };
        let inst = Instance {
            index,
            attempts: attempt,
            equigenerated,
            document,
            outcome,
        };
        if !matches!(inst.outcome, Outcome::Skipped { .. }) {
            return inst;
        }
        last = Some(inst);
    }
    last.expect("at least one attempt")
}

fn tally(agg: &mut Aggregate, inst: &Instance) {
    match &inst.outcome {
        Outcome::Skipped { reason } => {
            agg.skipped += 1;
            let key = reason.split(':').next().unwrap_or(reason).to_string();
            *agg.skip_reasons.entry(key).or_default() += 1;
        }
        Outcome::Defect { .. } => {}
        Outcome::Analyzed { analysis: a } => {
            agg.analyzed += 1;
            if inst.equigenerated {
                agg.equigenerated += 1;
            }
            let amm = a.amm.as_ref().is_some_and(|v| v.almost_minimal);
            if let Some(v) = &a.amm {
                agg.minimal_multiplicity += v.minimal_multiplicity as usize;
                agg.almost_minimal += v.almost_minimal as usize;
            }
            for audit in a.bounds.iter().chain(&a.classical_bounds) {
                for rec in &audit.records {
                    if rec.hypotheses_verified() {
                        agg.bound_records_checked += 1;
                        agg.bound_records_held += rec.holds as usize;
                    }
                }
            }
            if a.identities.as_ref().is_some_and(|i| i.failures().is_empty()) {
                agg.identity_passes += 1;
            }
            if amm {
                if let Some(d) = &a.depth {
                    agg.amm_depth_positive += d.fiber_depth_positive as usize;
                    agg.amm_sop_certified += d.sop.as_ref().is_some_and(|s| s.certified && s.depth >= 1) as usize;
                }
            }
            if let Some(s) = &a.series {
                if let Some(c) = &s.closed_form {
                    if s.hypotheses_verified {
                        agg.series_checked += 1;
                        agg.series_matched += c.matches as usize;
                    }
                }
                if let Some(g) = &s.graded {
                    agg.graded_series_checked += 1;
                    agg.graded_series_matched += g.matches as usize;
                }
            }
            agg.quotient_checks += a.quotient.is_some() as usize;
        }
    }
}

/// Generate and analyze `count` instances in fixed-size parallel batches,
/// in index order; the first defect stops the run.
pub fn run_corpus(params: &CorpusParams) -> Result<CorpusRun, AlgebraError> {
    params.validate()?;
    let mut instances = Vec::with_capacity(params.count);
    let mut agg = Aggregate::default();
    let mut defect = None;
    let mut start = 0;
    while start < params.count && defect.is_none() {
        let end = (start + BATCH).min(params.count);
        let batch: Vec<Instance> = (start..end).into_par_iter().map(|i| run_instance(params, i)).collect();
        for inst in batch {
            if defect.is_some() {
                break;
            }
            if let Outcome::Defect { message } = &inst.outcome {
                defect = Some(DefectDump {
                    index: inst.index,
                    message: message.clone(),
                    document: inst.document.clone(),
                });
            }
            tally(&mut agg, &inst);
            instances.push(inst);
        }
        start = end;
    }
    Ok(CorpusRun {
        params: params.clone(),
        instances,
        aggregate: agg,
        defect,
    })
}
