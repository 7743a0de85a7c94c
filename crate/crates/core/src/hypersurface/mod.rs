//! Polynomial systems for the five- and six-curvature cases and the two
//! elimination pipelines built on them.
//!
//! Fractional constants are always cleared before a polynomial is stored;
//! every clearing factor is recorded so comparisons are up to an explicit
//! rational constant.

mod case5;
mod case6;

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::linalg::DetStrategy;
use crate::poly::Poly;
use crate::rational::Rational;

pub use case5::{case4_check, theorem1_pipeline, Case4Report, CaseV, CaseVParams, DerivedF};
pub use case6::{
    eliminate_lambda_a, lemma51_identities, theorem2_pipeline, CaseVI, CaseVIParams, DerivedF6, FractionCheck,
    IdentityCheck, Lemma51Report,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct StageReport {
    pub name: String,
    pub degree_map: BTreeMap<String, u32>,
    pub nonzero: bool,
    pub millis: u64,
    pub terms: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchStatus {
    Equal,
    Proportional,
    Different,
}

/// Printed formula against its derived counterpart.
#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub name: String,
    pub status: MatchStatus,
    /// `derived = constant * printed` when proportional.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant: Option<String>,
    pub printed_terms: usize,
    pub derived_terms: usize,
    /// Terms in `derived - printed` (or `derived - constant * printed`).
    pub difference_terms: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Exact comparison up to a nonzero rational constant.
pub fn compare(name: &str, printed: &Poly, derived: &Poly) -> Comparison {
    let mut out = Comparison {
        name: name.to_string(),
        status: MatchStatus::Different,
        constant: None,
        printed_terms: printed.len(),
        derived_terms: derived.len(),
        difference_terms: (derived - printed).len(),
        note: None,
    };
    if printed == derived {
        out.status = MatchStatus::Equal;
        out.constant = Some("1".into());
        return out;
    }
    if let Some(c) = proportionality(printed, derived) {
        out.status = MatchStatus::Proportional;
        out.constant = Some(c.to_string());
        out.difference_terms = 0;
    }
    out
}

/// `c` with `derived = c * printed`, if it exists and is nonzero.
pub fn proportionality(printed: &Poly, derived: &Poly) -> Option<Rational> {
    let (pm, pc) = printed.leading_term()?;
    let (dm, dc) = derived.leading_term()?;
    if pm != dm {
        return None;
    }
    let c = dc / pc;
    (derived == &printed.scale(&c)).then_some(c)
}

#[derive(Clone, Copy, Debug)]
pub struct PipelineOptions {
    pub strategy: DetStrategy,
    /// When false every `millis` is reported as 0, making reports byte-stable.
    pub record_timings: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            strategy: DetStrategy::Auto,
            record_timings: true,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub case: String,
    pub params: BTreeMap<String, String>,
    pub stages: Vec<StageReport>,
    pub verdict: Verdict,
    pub proportionality_constants: BTreeMap<String, String>,
    pub printed_vs_derived_diffs: Vec<Comparison>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Stage polynomials by stage name, for callers that print them.
    #[serde(skip)]
    pub polys: BTreeMap<String, Poly>,
    /// Name of the stage holding the final resultant.
    #[serde(skip)]
    pub final_stage: String,
}

impl PipelineReport {
    fn new(case: &str, params: BTreeMap<String, String>) -> Self {
        PipelineReport {
            case: case.to_string(),
            params,
            stages: Vec::new(),
            verdict: Verdict::Fail,
            proportionality_constants: BTreeMap::new(),
            printed_vs_derived_diffs: Vec::new(),
            notes: Vec::new(),
            polys: BTreeMap::new(),
            final_stage: String::new(),
        }
    }

    pub fn stage(&self, name: &str) -> Option<&StageReport> {
        self.stages.iter().find(|s| s.name == name)
    }

    pub fn final_poly(&self) -> Option<&Poly> {
        self.polys.get(&self.final_stage)
    }
}

/// Times a stage and appends its report.
struct Recorder<'a> {
    report: &'a mut PipelineReport,
    timings: bool,
}

impl<'a> Recorder<'a> {
    fn timed<T>(&self, f: impl FnOnce() -> T) -> (T, u64) {
        let start = Instant::now();
        let out = f();
        let ms = if self.timings {
            start.elapsed().as_millis() as u64
        } else {
            0
        };
        (out, ms)
    }

    fn push(&mut self, name: &str, p: &Poly, millis: u64, note: Option<String>) {
        self.report.stages.push(StageReport {
            name: name.to_string(),
            degree_map: p.degree_map(),
            nonzero: !p.is_zero(),
            millis,
            terms: p.len(),
            note,
        });
        self.report.polys.insert(name.to_string(), p.clone());
    }
}
