//! Condition reports: per-prime outcomes, verdicts and the JSON schema.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Condition {
    Sp,
    Lsp,
    Rsp,
    Msp,
    Wmsp,
    Lmsp,
}

impl Condition {
    pub const ALL: [Condition; 6] =
        [Condition::Sp, Condition::Lsp, Condition::Rsp, Condition::Msp, Condition::Wmsp, Condition::Lmsp];

    pub fn name(self) -> &'static str {
        match self {
            Condition::Sp => "SP",
            Condition::Lsp => "LSP",
            Condition::Rsp => "RSP",
            Condition::Msp => "MSP",
            Condition::Wmsp => "WMSP",
            Condition::Lmsp => "LMSP",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Condition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Condition::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown condition {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Holds,
    HoldsWithExceptions,
    Violated,
}

impl Verdict {
    pub fn is_violated(self) -> bool {
        self == Verdict::Violated
    }
}

/// What was seen at a violating prime, enough to recheck it by hand.
///
/// `ord_P` and `ord_Q` are orders modulo the prime; `m` is a coefficient
/// vector with positive entries.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `ord_Q` does not divide `ord_P`.
    Orders {
        #[serde(rename = "ord_P")]
        ord_p: u64,
        #[serde(rename = "ord_Q")]
        ord_q: u64,
    },
    /// `v_ell(ord_Q) > v_ell(ord_P) + slack`.
    Valuations {
        ell: u64,
        slack: u32,
        #[serde(rename = "v_P")]
        v_p: u32,
        #[serde(rename = "v_Q")]
        v_q: u32,
        #[serde(rename = "ord_P")]
        ord_p: u64,
        #[serde(rename = "ord_Q")]
        ord_q: u64,
    },
    /// `ell` divides `ord_Q` but not `ord_P`.
    Radical {
        ell: u64,
        #[serde(rename = "ord_P")]
        ord_p: u64,
        #[serde(rename = "ord_Q")]
        ord_q: u64,
    },
    /// `sum m_i P_i` vanishes and `sum m_i Q_i` does not.
    Combination { m: Vec<u64> },
    /// `ord(sum m_i P_i)` is prime to `ell` and `ord(sum m_i Q_i)` is not.
    CoprimeCombination {
        ell: u64,
        m: Vec<u64>,
        #[serde(rename = "ord_P")]
        ord_p: u64,
        #[serde(rename = "ord_Q")]
        ord_q: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    pub p: u64,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Skipped {
    pub p: u64,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeRange {
    pub lo: u64,
    pub hi: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Orders,
    Exact,
    Box,
    Mixed,
}

/// Parameters recorded so that a report can be reproduced.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ell: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub slack: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sample: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bound: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub schema: u32,
    pub condition: Condition,
    pub range: PrimeRange,
    pub budget: usize,
    pub parameters: Parameters,
    pub mode: Mode,
    pub tested: usize,
    pub skipped: Vec<Skipped>,
    pub violations: Vec<Violation>,
    /// Number of distinct violating primes.
    pub exceptions: usize,
    pub verdict: Verdict,
    /// Set when a finite sample of primes stands in for an infinite set.
    pub sample_approximates_infinite_set: bool,
    pub notes: Vec<String>,
}

impl ConditionReport {
    pub fn new(condition: Condition, range: PrimeRange, budget: usize, parameters: Parameters, mode: Mode) -> Self {
        ConditionReport {
            schema: SCHEMA_VERSION,
            condition,
            range,
            budget,
            parameters,
            mode,
            tested: 0,
            skipped: Vec::new(),
            violations: Vec::new(),
            exceptions: 0,
            verdict: Verdict::Holds,
            sample_approximates_infinite_set: condition == Condition::Rsp,
            notes: Vec::new(),
        }
    }

    /// Sort, count violating primes and set the verdict.
    pub fn finalize(&mut self) {
        self.skipped.sort();
        self.skipped.dedup();
        self.violations.sort();
        self.violations.dedup();
        self.notes.sort();
        self.notes.dedup();
        self.exceptions = self.violations.iter().map(|v| v.p).collect::<BTreeSet<_>>().len();
        self.verdict = if self.exceptions == 0 {
            Verdict::Holds
        } else if self.exceptions <= self.budget {
            Verdict::HoldsWithExceptions
        } else {
            Verdict::Violated
        };
    }

    pub fn violating_primes(&self) -> Vec<u64> {
        self.violations.iter().map(|v| v.p).collect::<BTreeSet<_>>().into_iter().collect()
    }

    pub fn holds(&self) -> bool {
        !self.verdict.is_violated()
    }

    /// Combine reports over disjoint prime ranges of the same scan.
    pub fn merge(&self, other: &ConditionReport) -> Result<ConditionReport> {
        if self.condition != other.condition || self.parameters != other.parameters || self.budget != other.budget {
            return Err(Error::InvalidArgument("reports come from different scans".into()));
        }
        let (a, b) = (self.range, other.range);
        if a.lo <= b.hi && b.lo <= a.hi {
            return Err(Error::InvalidArgument(format!(
                "prime ranges {}..{} and {}..{} overlap",
                a.lo, a.hi, b.lo, b.hi
            )));
        }
        let mut out = self.clone();
        out.range = PrimeRange { lo: a.lo.min(b.lo), hi: a.hi.max(b.hi) };
        out.mode = if self.mode == other.mode { self.mode } else { Mode::Mixed };
        out.tested += other.tested;
        out.skipped.extend(other.skipped.iter().cloned());
        out.violations.extend(other.violations.iter().cloned());
        out.notes.extend(other.notes.iter().cloned());
        out.sample_approximates_infinite_set |= other.sample_approximates_infinite_set;
        out.finalize();
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
