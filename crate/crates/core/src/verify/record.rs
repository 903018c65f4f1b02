use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use super::alpha::AlphaParam;
use crate::numerics::{AuditedReal, PrecisionContext};

/// Outcome of one strict inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    /// Closer than `10^(-digits/2)` even after every escalation.
    Indeterminate,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Indeterminate => "indeterminate",
        }
    }

    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Indeterminate, _) | (_, Verdict::Indeterminate) => Verdict::Indeterminate,
            _ => Verdict::Pass,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A reported number: audited real or exact integer.
#[derive(Debug, Clone)]
pub enum Quantity {
    Real(AuditedReal),
    Exact(BigInt),
}

impl Quantity {
    pub fn signum(&self) -> Ordering {
        match self {
            Quantity::Real(r) => r.signum(),
            Quantity::Exact(v) => {
                if v.is_positive() {
                    Ordering::Greater
                } else if v.is_negative() {
                    Ordering::Less
                } else {
                    Ordering::Equal
                }
            }
        }
    }

    /// Reals in scientific notation with `sig` digits; integers in full.
    pub fn to_string_sig(&self, sig: usize) -> String {
        match self {
            Quantity::Real(r) => r.to_string_sig(sig),
            Quantity::Exact(v) => alloc::format!("{v}"),
        }
    }

    pub fn as_real(&self) -> Option<&AuditedReal> {
        match self {
            Quantity::Real(r) => Some(r),
            Quantity::Exact(_) => None,
        }
    }
}

/// A proof-internal inequality `lhs < rhs` asserted alongside the main check.
#[derive(Debug, Clone)]
pub struct ClaimRecord {
    pub name: &'static str,
    pub lhs: Quantity,
    pub rhs: Quantity,
    pub verdict: Verdict,
}

/// One evaluated `lower < middle < upper` at a single `n`.
#[derive(Debug, Clone)]
pub struct CheckRecord {
    pub n: u64,
    pub lower: Option<Quantity>,
    pub middle: Quantity,
    pub upper: Option<Quantity>,
    /// Smallest signed distance from `middle` to a present bound.
    pub margin: Quantity,
    pub pass_lower: Verdict,
    pub pass_upper: Verdict,
    pub claims: Vec<ClaimRecord>,
    pub diagnostics: Vec<(&'static str, Quantity)>,
    /// Which argument covers this `n` when a report stitches regimes.
    pub regime: Option<&'static str>,
    /// Working digits the verdicts were finally decided at.
    pub digits: u32,
}

impl CheckRecord {
    pub fn verdict(&self) -> Verdict {
        self.claims
            .iter()
            .fold(self.pass_lower.and(self.pass_upper), |v, c| v.and(c.verdict))
    }

    pub fn passed(&self) -> bool {
        self.verdict() == Verdict::Pass
    }
}

/// Aggregated results of one check over `[n_from, n_to]`.
#[derive(Debug, Clone)]
pub struct RangeReport {
    pub check: &'static str,
    pub alpha: Option<AlphaParam>,
    pub n_from: u64,
    pub n_to: u64,
    pub all_pass: bool,
    pub first_failure: Option<u64>,
    pub first_indeterminate: Option<u64>,
    pub records: Vec<CheckRecord>,
    pub context: PrecisionContext,
    /// False when the range was run outside the claimed range.
    pub paper_claim: bool,
    pub notes: Vec<String>,
}

impl RangeReport {
    pub fn new(
        check: &'static str,
        alpha: Option<AlphaParam>,
        n_from: u64,
        n_to: u64,
        mut records: Vec<CheckRecord>,
        context: PrecisionContext,
    ) -> Self {
        records.sort_by_key(|r| r.n);
        let first_failure = records
            .iter()
            .find(|r| r.verdict() == Verdict::Fail)
            .map(|r| r.n);
        let first_indeterminate = records
            .iter()
            .find(|r| r.verdict() == Verdict::Indeterminate)
            .map(|r| r.n);
        Self {
            check,
            alpha,
            n_from,
            n_to,
            all_pass: records.iter().all(CheckRecord::passed),
            first_failure,
            first_indeterminate,
            records,
            context,
            paper_claim: true,
            notes: Vec::new(),
        }
    }

    /// Ordered merge of reports for adjacent sub-ranges of one check.
    pub fn merge(parts: Vec<RangeReport>) -> Option<RangeReport> {
        let mut parts = parts.into_iter();
        let first = parts.next()?;
        let (check, alpha, context, paper_claim, notes) = (
            first.check,
            first.alpha.clone(),
            first.context,
            first.paper_claim,
            first.notes.clone(),
        );
        let mut n_from = first.n_from;
        let mut n_to = first.n_to;
        let mut records = first.records;
        for p in parts {
            n_from = n_from.min(p.n_from);
            n_to = n_to.max(p.n_to);
            records.extend(p.records);
        }
        let mut merged = RangeReport::new(check, alpha, n_from, n_to, records, context);
        merged.paper_claim = paper_claim;
        merged.notes = notes;
        Some(merged)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.verdict() == Verdict::Fail)
    }

    /// Smallest margin over all records, as an `f64` for summaries.
    pub fn min_margin_f64(&self) -> Option<f64> {
        self.records
            .iter()
            .filter_map(|r| r.margin.as_real().map(AuditedReal::to_f64))
            .reduce(f64::min)
    }
}
