//! CSV, JSON and plain-text renderings of range reports.
//!
//! Reals are printed in scientific notation with `min(digits, 40)`
//! significant digits, records in increasing `n`, so identical inputs give
//! byte-identical output.

use std::fmt::Write as _;

use opart_core::verify::{AsymptoticRow, CheckRecord, Quantity, RangeReport};
use opart_core::AuditedReal;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    #[default]
    Text,
}

/// Identifies what a report was computed from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Header {
    pub check: String,
    pub alpha: Option<String>,
    pub digits: u32,
    pub table_checksum: Option<u64>,
}

impl Header {
    pub fn for_report(report: &RangeReport, table_checksum: Option<u64>) -> Self {
        Self {
            check: report.check.to_string(),
            alpha: report.alpha.as_ref().map(ToString::to_string),
            digits: report.context.digits(),
            table_checksum,
        }
    }

    fn sig(&self) -> usize {
        (self.digits as usize).min(40)
    }

    fn json(&self) -> Value {
        json!({
            "check": self.check,
            "alpha": self.alpha,
            "digits": self.digits,
            "table_checksum": self.table_checksum,
        })
    }

    fn comment(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
        format!(
            "# check={} alpha={} digits={} table_checksum={}",
            self.check,
            opt(self.alpha.clone()),
            self.digits,
            opt(self.table_checksum.map(|c| c.to_string()))
        )
    }
}

fn q(v: &Quantity, sig: usize) -> String {
    v.to_string_sig(sig)
}

fn opt_q(v: &Option<Quantity>, sig: usize) -> String {
    v.as_ref().map(|v| q(v, sig)).unwrap_or_default()
}

pub fn render(report: &RangeReport, header: &Header, format: Format) -> String {
    match format {
        Format::Csv => csv(report, header),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json_value(report, header)).expect("json values serialize");
            s.push('\n');
            s
        }
        Format::Text => text(report, header),
    }
}

pub fn csv(report: &RangeReport, header: &Header) -> String {
    let sig = header.sig();
    let mut out = header.comment();
    out.push('\n');
    out.push_str("n,lower,middle,upper,margin,pass\n");
    for r in &report.records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.n,
            opt_q(&r.lower, sig),
            q(&r.middle, sig),
            opt_q(&r.upper, sig),
            q(&r.margin, sig),
            r.verdict()
        );
    }
    out
}

pub fn record_json(r: &CheckRecord, sig: usize) -> Value {
    let opt = |v: &Option<Quantity>| v.as_ref().map(|v| Value::String(q(v, sig))).unwrap_or(Value::Null);
    let claims: Vec<Value> = r
        .claims
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "lhs": q(&c.lhs, sig),
                "rhs": q(&c.rhs, sig),
                "verdict": c.verdict.as_str(),
            })
        })
        .collect();
    let mut diagnostics = Map::new();
    for (name, v) in &r.diagnostics {
        diagnostics.insert((*name).to_string(), Value::String(q(v, sig)));
    }
    json!({
        "n": r.n,
        "lower": opt(&r.lower),
        "middle": q(&r.middle, sig),
        "upper": opt(&r.upper),
        "margin": q(&r.margin, sig),
        "pass_lower": r.pass_lower.as_str(),
        "pass_upper": r.pass_upper.as_str(),
        "pass": r.verdict().as_str(),
        "claims": claims,
        "diagnostics": diagnostics,
        "regime": r.regime,
        "digits": r.digits,
    })
}

pub fn json_value(report: &RangeReport, header: &Header) -> Value {
    let sig = header.sig();
    json!({
        "header": header.json(),
        "n_from": report.n_from,
        "n_to": report.n_to,
        "all_pass": report.all_pass,
        "first_failure": report.first_failure,
        "first_indeterminate": report.first_indeterminate,
        "paper_claim": report.paper_claim,
        "notes": report.notes,
        "records": report.records.iter().map(|r| record_json(r, sig)).collect::<Vec<_>>(),
    })
}

pub fn text(report: &RangeReport, header: &Header) -> String {
    let sig = header.sig().min(20);
    let mut out = header.comment();
    out.push('\n');
    for note in &report.notes {
        let _ = writeln!(out, "# note: {note}");
    }
    let _ = writeln!(out, "{:>7}  {:<27} {:<27} {:<14} regime", "n", "middle", "margin", "verdict");
    for r in &report.records {
        let _ = writeln!(
            out,
            "{:>7}  {:<27} {:<27} {:<14} {}",
            r.n,
            q(&r.middle, sig),
            q(&r.margin, sig),
            r.verdict(),
            r.regime.unwrap_or("")
        );
    }
    let _ = writeln!(out, "{}", summary(report));
    out
}

/// One line: range, record count, outcome.
pub fn summary(report: &RangeReport) -> String {
    let outcome = if report.all_pass {
        "all pass".to_string()
    } else if let Some(n) = report.first_failure {
        format!("FAIL first at n={n}")
    } else if let Some(n) = report.first_indeterminate {
        format!("INDETERMINATE first at n={n}")
    } else {
        "not decided".to_string()
    };
    let claim = if report.paper_claim { "" } else { " (no paper claim)" };
    format!(
        "{} on [{}, {}]: {} records, {}{}",
        report.check,
        report.n_from,
        report.n_to,
        report.records.len(),
        outcome,
        claim
    )
}

/// Every field of one record, for counterexample output.
pub fn record_detail(r: &CheckRecord, digits: u32) -> String {
    let sig = (digits as usize).min(40);
    let mut out = String::new();
    let _ = writeln!(out, "n = {} ({} digits)", r.n, r.digits);
    let _ = writeln!(out, "  lower  = {}", opt_q(&r.lower, sig));
    let _ = writeln!(out, "  middle = {}", q(&r.middle, sig));
    let _ = writeln!(out, "  upper  = {}", opt_q(&r.upper, sig));
    let _ = writeln!(out, "  margin = {}", q(&r.margin, sig));
    let _ = writeln!(out, "  pass_lower = {}, pass_upper = {}", r.pass_lower, r.pass_upper);
    if let Some(regime) = r.regime {
        let _ = writeln!(out, "  regime = {regime}");
    }
    for c in &r.claims {
        let _ = writeln!(out, "  claim {}: {} < {} -> {}", c.name, q(&c.lhs, sig), q(&c.rhs, sig), c.verdict);
    }
    for (name, v) in &r.diagnostics {
        let _ = writeln!(out, "  {name} = {}", q(v, sig));
    }
    out
}

fn real(v: &AuditedReal, sig: usize) -> String {
    v.to_string_sig(sig)
}

pub fn render_asymptotic(rows: &[AsymptoticRow], header: &Header, format: Format) -> String {
    let sig = header.sig();
    match format {
        Format::Csv => {
            let mut out = header.comment();
            out.push_str("\nn,scaled,distance,lower,upper,inside\n");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.n,
                    real(&r.scaled, sig),
                    real(&r.distance, sig),
                    r.lower.as_ref().map(|l| real(l, sig)).unwrap_or_default(),
                    real(&r.upper, sig),
                    r.inside
                );
            }
            out
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "scaled": real(&r.scaled, sig),
                        "distance": real(&r.distance, sig),
                        "lower": r.lower.as_ref().map(|l| real(l, sig)),
                        "upper": real(&r.upper, sig),
                        "inside": r.inside.as_str(),
                        "digits": r.digits,
                    })
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&json!({ "header": header.json(), "rows": rows }))
                .expect("json values serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let sig = sig.min(20);
            let mut out = header.comment();
            let _ = writeln!(out, "\n# limit 3π/4 = 2.356194490192344928846982537459627163148");
            let _ = writeln!(out, "{:>7}  {:<27} {:<27} inside bracket", "n", "n^(5/2)·Δ² log r", "distance");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{:>7}  {:<27} {:<27} {}",
                    r.n,
                    real(&r.scaled, sig),
                    real(&r.distance, sig),
                    r.inside
                );
            }
            out
        }
    }
}
