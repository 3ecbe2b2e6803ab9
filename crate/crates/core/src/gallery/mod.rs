//! Worked instances of the conditions: each case builds its points, runs
//! checkers and relation finders, and compares what it sees with what the
//! construction predicts.

pub mod cases;
pub mod random;

use std::fmt::{self, Display, Write};

use serde::Serialize;

use crate::error::{Error, Result};

pub use cases::{
    cm_lmsp_analogue, ex_cm_annihilator, ex_finite_s, ex_nobar1, ex_notrelated, ex_radnobound_s,
    verify_main_theorem_dichotomy, CmPrimeResult, DichotomySummary,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// One predicted property and what was observed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub description: String,
    pub expected: String,
    pub observed: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseResult {
    pub name: String,
    pub status: Status,
    pub claims: Vec<Claim>,
    /// Case-specific observations: constructed points, relations, controls.
    pub data: serde_json::Map<String, serde_json::Value>,
    pub notes: Vec<String>,
}

impl CaseResult {
    pub fn new(name: &str) -> Self {
        CaseResult {
            name: name.to_string(),
            status: Status::Pass,
            claims: Vec::new(),
            data: serde_json::Map::new(),
            notes: Vec::new(),
        }
    }

    pub fn claim(&mut self, description: &str, expected: impl Display, observed: impl Display, passed: bool) {
        self.claims.push(Claim {
            description: description.to_string(),
            expected: expected.to_string(),
            observed: observed.to_string(),
            passed,
        });
        if !passed {
            self.status = Status::Fail;
        }
    }

    /// Claim that `observed == expected`.
    pub fn claim_eq<T: Display + PartialEq>(&mut self, description: &str, expected: T, observed: T) {
        let ok = expected == observed;
        self.claim(description, expected, observed, ok);
    }

    pub fn record(&mut self, key: &str, value: impl Serialize) {
        self.data.insert(key.to_string(), serde_json::to_value(value).expect("serializable"));
    }

    pub fn mark_inconclusive(&mut self) {
        if self.status == Status::Pass {
            self.status = Status::Inconclusive;
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Knobs shared by all cases; `None` keeps each case's own default.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GalleryOptions {
    pub h: u32,
    pub trials: usize,
    pub seed: u64,
    pub hi: Option<u64>,
}

impl Default for GalleryOptions {
    fn default() -> Self {
        GalleryOptions { h: 3, trials: 200, seed: 1, hi: None }
    }
}

pub const CASE_NAMES: [&str; 6] = ["radnoboundS", "finite_S", "nobar1", "notrelated", "cm_annihilator", "dichotomy"];

/// Known counterexamples that need constructions outside this toolkit.
pub const UNIMPLEMENTED_REFERENCES: [&str; 2] = [
    "a counterexample to the plain support problem on an abelian variety of higher dimension",
    "a counterexample built from a product of an abelian variety with a torus",
];

pub fn run_case(name: &str, opts: &GalleryOptions) -> Result<CaseResult> {
    let hi = |default: u64| opts.hi.unwrap_or(default);
    match name {
        "radnoboundS" => ex_radnobound_s(opts.h, hi(2000)),
        "finite_S" => ex_finite_s(hi(10_000)),
        "nobar1" => ex_nobar1(hi(10_000), 100),
        "notrelated" => cases::notrelated_default(hi(2000)),
        "cm_annihilator" => ex_cm_annihilator(5, hi(1000)),
        "dichotomy" => Ok(verify_main_theorem_dichotomy(opts.trials, opts.seed, hi(1000), hi(10_000))?.into_case()),
        _ => Err(Error::InvalidArgument(format!(
            "unknown gallery case {name:?}; known cases: {}",
            CASE_NAMES.join(", ")
        ))),
    }
}

/// Run every case, independently and in parallel; output order is fixed.
pub fn run_all(opts: &GalleryOptions) -> Result<Vec<CaseResult>> {
    use rayon::prelude::*;
    CASE_NAMES.par_iter().map(|n| run_case(n, opts)).collect()
}

pub fn summary_table(cases: &[CaseResult]) -> String {
    let width = cases.iter().map(|c| c.name.len()).max().unwrap_or(4).max(4);
    let mut out = String::new();
    let _ = writeln!(out, "{:<width$}  {:<12}  claims", "case", "status");
    for c in cases {
        let ok = c.claims.iter().filter(|x| x.passed).count();
        let _ = writeln!(out, "{:<width$}  {:<12}  {}/{}", c.name, c.status.to_string(), ok, c.claims.len());
    }
    out
}
