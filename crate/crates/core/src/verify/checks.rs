use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use astro_float::BigFloat;

use super::alpha::{n_alpha, threshold, AlphaParam, ALPHA_ZERO_THRESHOLD, UPPER_BOUND_THRESHOLD};
use super::main_term_bounds::*;
use super::record::{CheckRecord, Quantity, RangeReport, Verdict};
use super::{
    exact_logconcavity_record, max_abs, n3_remainder, second_difference, theorem_lower, theorem_upper, Sample,
    Session,
};
use crate::error::{Error, Result};
use crate::exact::OverpartitionTable;
use crate::numerics::{Arith, AuditedReal, PrecisionContext};
use crate::series::{engel_n3_bound, mu};

/// Inequalities the verifier can sweep over a range of centres `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckKind {
    /// Both bounds on `Δ² log r_α` from `N(α)` on.
    Theorem1 { alpha: AlphaParam },
    /// `Δ² log r_α > 0`: checked directly below `N(α)` for `α ∈ {0, 1}`, by the two-sided bound above.
    Convexity { alpha: AlphaParam },
    /// `Δ² log r_0 < ln(1 + 3π/(4n^{5/2}))` from `n = 2`, the log form of the ratio inequality.
    Corollary3,
    /// Bracket on `Δ²(ln T̄(n-1)/(n-1))`.
    Lemma2,
    /// `|Δ²(Ē(n-1)/(n-1))| < 5/(n-1)·e^{-μ̄(n-1)/12}`.
    Lemma3,
    /// Bracket on `-α·Δ²(ln(n-1)/(n-1))`; table-free.
    Lemma4 { alpha: AlphaParam },
    /// Upper bound alone, from `n = 4021`.
    Lemma5 { alpha: AlphaParam },
    /// Lower bound alone, from `N(α)`.
    Lemma6 { alpha: AlphaParam },
    /// Upper bound from 4021 and lower bound from `N(α)`, each tagged where it applies.
    Lemma56 { alpha: AlphaParam },
    /// `p̄(n)² > p̄(n-1)·p̄(n+1)` in exact integers.
    LogConcavity,
}

impl CheckKind {
    pub fn name(&self) -> &'static str {
        match self {
            CheckKind::Theorem1 { .. } => "theorem1",
            CheckKind::Convexity { alpha } if alpha.is_zero() => "corollary2",
            CheckKind::Convexity { .. } => "corollary1",
            CheckKind::Corollary3 => "corollary3",
            CheckKind::Lemma2 => "lemma2",
            CheckKind::Lemma3 => "lemma3",
            CheckKind::Lemma4 { .. } => "lemma4",
            CheckKind::Lemma5 { .. } => "lemma5",
            CheckKind::Lemma6 { .. } => "lemma6",
            CheckKind::Lemma56 { .. } => "lemma56",
            CheckKind::LogConcavity => "logconcavity",
        }
    }

    pub fn alpha(&self) -> Option<AlphaParam> {
        match self {
            CheckKind::Theorem1 { alpha }
            | CheckKind::Convexity { alpha }
            | CheckKind::Lemma4 { alpha }
            | CheckKind::Lemma5 { alpha }
            | CheckKind::Lemma6 { alpha }
            | CheckKind::Lemma56 { alpha } => Some(alpha.clone()),
            CheckKind::Corollary3 => Some(AlphaParam::zero()),
            _ => None,
        }
    }

    /// Whether records read `p̄` values up to `n + 1`.
    pub fn needs_table(&self) -> bool {
        !matches!(self, CheckKind::Lemma4 { .. } | CheckKind::Lemma2)
    }

    /// Smallest centre the check is defined at, claimed or not.
    fn structural_minimum(&self) -> u64 {
        match self {
            CheckKind::LogConcavity => 1,
            _ => 2,
        }
    }

    /// Smallest `n` from which the inequality is claimed.
    pub fn threshold(&self) -> Result<u64> {
        Ok(match self {
            CheckKind::Theorem1 { alpha } | CheckKind::Lemma6 { alpha } => n_alpha(alpha)?,
            CheckKind::Convexity { alpha } => direct_convexity_range(alpha)
                .map(|(from, _)| Ok(from))
                .unwrap_or_else(|| n_alpha(alpha))?,
            CheckKind::Corollary3 | CheckKind::Lemma2 | CheckKind::LogConcavity => 2,
            CheckKind::Lemma3 => 38,
            CheckKind::Lemma4 { .. } => 7,
            CheckKind::Lemma5 { .. } | CheckKind::Lemma56 { .. } => UPPER_BOUND_THRESHOLD,
        })
    }

    /// The range the check is run over when none is given.
    pub fn default_range(&self) -> Result<(u64, u64)> {
        let spot = |alpha: &AlphaParam| -> Result<(u64, u64)> {
            Ok(if alpha.is_zero() {
                (ALPHA_ZERO_THRESHOLD, 5600)
            } else if *alpha == AlphaParam::from_integer(1) {
                (5505, 6000)
            } else {
                let n = n_alpha(alpha)?;
                (n, n + 500)
            })
        };
        Ok(match self {
            CheckKind::Theorem1 { alpha } | CheckKind::Lemma6 { alpha } => spot(alpha)?,
            CheckKind::Convexity { alpha } => match direct_convexity_range(alpha) {
                Some(r) => r,
                None => spot(alpha)?,
            },
            CheckKind::Corollary3 => (2, ALPHA_ZERO_THRESHOLD),
            CheckKind::Lemma2 => (2, 5000),
            CheckKind::Lemma3 => (38, 5000),
            CheckKind::Lemma4 { .. } => (7, 1000),
            CheckKind::Lemma5 { .. } => (UPPER_BOUND_THRESHOLD, ALPHA_ZERO_THRESHOLD - 1),
            CheckKind::Lemma56 { alpha } => (UPPER_BOUND_THRESHOLD, n_alpha(alpha)? + 100),
            CheckKind::LogConcavity => (2, 5504),
        })
    }

    /// Rejects empty, undefined and (unless exploring) unclaimed ranges.
    pub fn validate(&self, from: u64, to: u64, exploratory: bool) -> Result<()> {
        if from > to {
            return Err(Error::EmptyRange { from, to });
        }
        if let CheckKind::Lemma4 { alpha } = self {
            if alpha.is_zero() {
                return Err(Error::InvalidArgument("the logarithmic bracket needs α > 0".into()));
            }
        }
        if let CheckKind::Convexity { alpha } | CheckKind::Lemma6 { alpha } | CheckKind::Lemma56 { alpha } = self {
            threshold(alpha)?;
        }
        let min = self.structural_minimum();
        if from < min {
            return Err(Error::InvalidArgument(format!(
                "{} is undefined below n = {min}",
                self.name()
            )));
        }
        let t = self.threshold()?;
        if from < t && !exploratory {
            return Err(Error::BelowThreshold {
                check: self.name(),
                from,
                to,
                threshold: t,
            });
        }
        Ok(())
    }

    fn notes(&self, from: u64) -> Result<Vec<String>> {
        let mut notes = Vec::new();
        let t = self.threshold()?;
        if from < t {
            notes.push(format!("no paper claim below n = {t}"));
        }
        if let Some(alpha) = &self.alpha() {
            if !alpha.is_zero() && self.uses_n_alpha() {
                let th = threshold(alpha)?;
                notes.push(format!(
                    "N(α) = {} with [3490/α] read as floor ({}), quartic term {}",
                    th.value,
                    th.reciprocal_term.unwrap_or(0),
                    th.quartic_term
                ));
            }
        }
        Ok(notes)
    }

    fn uses_n_alpha(&self) -> bool {
        matches!(
            self,
            CheckKind::Theorem1 { .. } | CheckKind::Convexity { .. } | CheckKind::Lemma6 { .. } | CheckKind::Lemma56 { .. }
        )
    }

    /// Values of one record at precision level `a`.
    fn sample(&self, s: &Session<'_>, a: &Arith, n: u64) -> Result<Sample> {
        match self {
            CheckKind::Theorem1 { alpha } => Ok(Sample {
                lower: theorem_lower(a, n, alpha)?,
                upper: Some(theorem_upper(a, n)?),
                ..log_r_middle(s, a, n, alpha)?
            }),
            CheckKind::Convexity { alpha } => convexity_sample(s, a, n, alpha),
            CheckKind::Corollary3 => Ok(Sample {
                upper: Some(theorem_upper(a, n)?),
                regime: Some(if n <= ALPHA_ZERO_THRESHOLD { "direct" } else { "lemma5" }),
                ..log_r_middle(s, a, n, &AlphaParam::zero())?
            }),
            CheckKind::Lemma2 => lemma2_sample(s, a, n),
            CheckKind::Lemma3 => lemma3_sample(s, a, n),
            CheckKind::Lemma4 { alpha } => lemma4_sample(a, n, alpha),
            CheckKind::Lemma5 { alpha } => Ok(Sample {
                upper: Some(theorem_upper(a, n)?),
                ..log_r_middle(s, a, n, alpha)?
            }),
            CheckKind::Lemma6 { alpha } => Ok(Sample {
                lower: Some(theorem_lower(a, n, alpha)?.ok_or(Error::Domain { function: "ln" })?),
                ..log_r_middle(s, a, n, alpha)?
            }),
            CheckKind::Lemma56 { alpha } => {
                let both = n >= n_alpha(alpha)?;
                Ok(Sample {
                    lower: if both { theorem_lower(a, n, alpha)? } else { None },
                    upper: Some(theorem_upper(a, n)?),
                    regime: Some(if both { "upper+lower" } else { "upper" }),
                    ..log_r_middle(s, a, n, alpha)?
                })
            }
            CheckKind::LogConcavity => Err(Error::InvalidArgument("log-concavity is checked exactly".into())),
        }
    }
}

/// The directly checked convexity range, for the two exponents it exists for.
fn direct_convexity_range(alpha: &AlphaParam) -> Option<(u64, u64)> {
    if alpha.is_zero() {
        Some((4, ALPHA_ZERO_THRESHOLD - 1))
    } else if *alpha == AlphaParam::from_integer(1) {
        Some((19, 5504))
    } else {
        None
    }
}

fn convexity_sample(s: &Session<'_>, a: &Arith, n: u64, alpha: &AlphaParam) -> Result<Sample> {
    let (d, scale) = s.delta2_log_r_scaled(a, n, alpha)?;
    let mut sample = Sample {
        lower: Some(a.int(0)),
        middle_scale: Some(scale),
        regime: Some("direct"),
        ..Sample::default()
    };
    if n >= n_alpha(alpha)? {
        // covered by the two-sided bound: 0 < lower bound < Δ²
        if let Some(l) = theorem_lower(a, n, alpha)? {
            sample.claims.push(("0 < theorem lower bound", a.int(0), l.clone()));
            sample.claims.push(("theorem lower bound < Δ² log r", l, d.clone()));
        } else {
            sample.claims.push(("theorem lower bound is defined", a.int(0), a.int(-1)));
        }
        sample.regime = Some("theorem1");
    }
    sample.middle = Some(d);
    Ok(sample)
}

/// Centred second difference of `f` and the magnitude of its terms.
fn centred<F>(a: &Arith, n: u64, mut f: F) -> Result<(BigFloat, BigFloat)>
where
    F: FnMut(u64) -> Result<BigFloat>,
{
    let v = [f(n - 1)?, f(n)?, f(n + 1)?];
    Ok((second_difference(a, [&v[0], &v[1], &v[2]]), max_abs(a, &v)))
}

/// `Δ² log r_α` as a sample middle term.
fn log_r_middle(s: &Session<'_>, a: &Arith, n: u64, alpha: &AlphaParam) -> Result<Sample> {
    let (d, scale) = s.delta2_log_r_scaled(a, n, alpha)?;
    Ok(Sample {
        middle: Some(d),
        middle_scale: Some(scale),
        ..Sample::default()
    })
}

fn lemma2_sample(s: &Session<'_>, a: &Arith, n: u64) -> Result<Sample> {
    let (m, p) = (n - 1, n + 1);
    let (middle, scale) = centred(a, n, |x| Ok(a.div(&s.ln_main(a, x)?, &a.uint(x))))?;
    let four_over_cube = a.div(&a.int(4), &cube(a, m));
    let g1 = a.sub(&g1pp(a, p)?, &log_over_cube(a, 5, m)?);
    let g2 = a.add(&a.sub(&g1pp(a, m)?, &log_over_cube(a, 3, p)?), &four_over_cube);
    let nine_half = |x: u64| a.div(&a.int(9), &a.mul(&a.int(2), &cube(a, x)));
    let u1 = a.add(&log_over_cube(a, -6, p)?, &g3pp_log(a, m)?);
    let u2 = a.add(&a.add(&nine_half(p), &g3pp_rest(a, m)?), &g4pp(a, m)?);
    let l1 = a.add(&log_over_cube(a, -6, m)?, &g3pp_log(a, p)?);
    let l2 = a.add(&a.add(&nine_half(m), &g3pp_rest(a, p)?), &g4pp(a, p)?);
    let mut claims = vec![
        ("G1 < G2", g1.clone(), g2.clone()),
        ("U2 < 4/(n-1)^3", u2.clone(), four_over_cube),
    ];
    if n >= 9 {
        claims.push(("0 < L2", a.int(0), l2.clone()));
        claims.push(("-5 ln mu(n-1)/(n-1)^3 < L1", log_over_cube(a, -5, m)?, l1.clone()));
    }
    let g3 = a.add(&g3pp_log(a, n)?, &g3pp_rest(a, n)?);
    Ok(Sample {
        lower: Some(g1),
        middle: Some(middle),
        middle_scale: Some(scale),
        upper: Some(g2),
        claims,
        diagnostics: vec![
            ("g1''", g1pp(a, n)?),
            ("g2''", g2pp(a, n)?),
            ("g3''", g3),
            ("g4''", g4pp(a, n)?),
            ("U1", u1),
            ("U2", u2),
            ("L1", l1),
            ("L2", l2),
        ],
        regime: None,
    })
}

fn lemma3_sample(s: &Session<'_>, a: &Arith, n: u64) -> Result<Sample> {
    let (middle, scale) = centred(a, n, |x| {
        let [_, _, _, e_big] = s.decomposition(a, x)?;
        Ok(a.div(&e_big, &a.uint(x)))
    })?;
    let twelfth = |x: u64| -> Result<BigFloat> { a.exp(&a.div(&mu(a, x)?, &a.int(12)).neg()) };
    let bound = a.div(&a.mul(&a.int(5), &twelfth(n - 1)?), &a.uint(n - 1));
    let [_, _, e_small, e_big] = s.decomposition(a, n)?;
    let abs_e = a.abs(&e_small);
    let remainder = n3_remainder(s, a, n)?;
    let engel = engel_n3_bound(a, n)?;
    let mut claims = Vec::new();
    if n >= 7 {
        claims.push(("|e(n)| < exp(-mu(n)/12)", abs_e.clone(), twelfth(n)?));
    }
    if n >= 38 {
        claims.push(("|e(n)| < 1/5", abs_e.clone(), a.ratio(1, 5)));
    }
    Ok(Sample {
        lower: Some(bound.neg()),
        middle: Some(middle),
        middle_scale: Some(scale),
        upper: Some(bound),
        claims,
        diagnostics: vec![
            ("e", e_small),
            ("E", e_big),
            ("engel_n3_bound", engel.clone()),
            ("|p - k1 term|", remainder.clone()),
            ("|p - k1 term|/engel_n3_bound", a.div(&remainder, &engel)),
        ],
        regime: None,
    })
}

fn lemma4_sample(a: &Arith, n: u64, alpha: &AlphaParam) -> Result<Sample> {
    let al = alpha.to_float(a);
    let side = |x: u64| -> Result<BigFloat> {
        let ln = a.ln(&a.uint(x))?;
        let num = a.sub(&a.int(3), &a.mul(&a.int(2), &ln));
        Ok(a.div(&a.mul(&al, &num), &cube(a, x)))
    };
    let (d, scale) = centred(a, n, |x| Ok(a.div(&a.ln(&a.uint(x))?, &a.uint(x))))?;
    Ok(Sample {
        lower: Some(side(n - 1)?),
        middle: Some(a.mul(&al, &d).neg()),
        middle_scale: Some(a.mul(&al, &scale)),
        upper: Some(side(n + 1)?),
        ..Sample::default()
    })
}

/// Records for `[from, to]` without range validation; callers that split a
/// range across workers validate once up front.
pub fn check_records(
    kind: &CheckKind,
    from: u64,
    to: u64,
    table: Option<&OverpartitionTable>,
    ctx: &PrecisionContext,
) -> Result<Vec<CheckRecord>> {
    if from > to {
        return Ok(Vec::new());
    }
    if kind.needs_table() {
        table
            .ok_or_else(|| Error::InvalidArgument(format!("{} needs a p̄ table", kind.name())))?
            .ensure_covers(to + 1)?;
    }
    if let CheckKind::LogConcavity = kind {
        let table = table.ok_or_else(|| Error::InvalidArgument("logconcavity needs a p̄ table".into()))?;
        return (from..=to)
            .map(|n| exact_logconcavity_record(table, n, ctx.digits()))
            .collect();
    }
    let session = Session::new(table, *ctx)?;
    let probe = |s: &Session<'_>, a: &Arith, n: u64| kind.sample(s, a, n);
    (from..=to).map(|n| session.record(n, &probe)).collect()
}

/// Wraps already computed records in a report for `kind` over `[from, to]`.
pub fn assemble_report(
    kind: &CheckKind,
    from: u64,
    to: u64,
    records: Vec<CheckRecord>,
    ctx: &PrecisionContext,
) -> Result<RangeReport> {
    let mut report = RangeReport::new(kind.name(), kind.alpha(), from, to, records, *ctx);
    report.paper_claim = from >= kind.threshold()?;
    report.notes = kind.notes(from)?;
    Ok(report)
}

/// Validates the range, evaluates every centre in it and assembles the report.
pub fn run_check(
    kind: &CheckKind,
    from: u64,
    to: u64,
    table: Option<&OverpartitionTable>,
    ctx: &PrecisionContext,
    exploratory: bool,
) -> Result<RangeReport> {
    kind.validate(from, to, exploratory)?;
    let records = check_records(kind, from, to, table, ctx)?;
    assemble_report(kind, from, to, records, ctx)
}

/// Exact `p̄(n)² > p̄(n-1)·p̄(n+1)` over `[from, to]`.
pub fn engel_logconcavity_check(from: u64, to: u64, table: &OverpartitionTable) -> Result<RangeReport> {
    run_check(&CheckKind::LogConcavity, from, to, Some(table), &PrecisionContext::default(), false)
}

/// One row of the scaled second-difference table.
#[derive(Debug, Clone)]
pub struct AsymptoticRow {
    pub n: u64,
    /// `n^{5/2}·Δ² log r_α` centred at `n`.
    pub scaled: AuditedReal,
    /// `scaled - 3π/4`.
    pub distance: AuditedReal,
    /// `n^{5/2}` times the two-sided bound; the lower one is absent when its log argument is not positive.
    pub lower: Option<AuditedReal>,
    pub upper: AuditedReal,
    pub inside: Verdict,
    pub digits: u32,
}

/// `n^{5/2}·Δ² log r_α(n)` at each sample with its distance to `3π/4`.
pub fn asymptotic_table(
    alpha: &AlphaParam,
    sample_ns: &[u64],
    table: &OverpartitionTable,
    ctx: &PrecisionContext,
) -> Result<Vec<AsymptoticRow>> {
    if let Some(&n) = sample_ns.iter().find(|&&n| n < 2) {
        return Err(Error::InvalidArgument(format!("asymptotic samples need n >= 2, got {n}")));
    }
    if let Some(&max) = sample_ns.iter().max() {
        table.ensure_covers(max + 1)?;
    }
    let session = Session::new(Some(table), *ctx)?;
    let probe = |s: &Session<'_>, a: &Arith, n: u64| -> Result<Sample> {
        let scale = a.pow_quarters(&a.uint(n), 10)?;
        let (d, terms) = s.delta2_log_r_scaled(a, n, alpha)?;
        let scaled = a.mul(&scale, &d);
        let three_quarter_pi = a.div(&a.mul(&a.int(3), &a.pi()), &a.int(4));
        Ok(Sample {
            lower: theorem_lower(a, n, alpha)?.map(|l| a.mul(&scale, &l)),
            upper: Some(a.mul(&scale, &theorem_upper(a, n)?)),
            diagnostics: vec![("distance", a.sub(&scaled, &three_quarter_pi))],
            middle: Some(scaled),
            middle_scale: Some(a.mul(&scale, &terms)),
            ..Sample::default()
        })
    };
    sample_ns
        .iter()
        .map(|&n| {
            let r = session.record(n, &probe)?;
            let real = |q: Quantity| match q {
                Quantity::Real(r) => Ok(r),
                Quantity::Exact(_) => Err(Error::Arithmetic("exact value in a real row")),
            };
            let inside = r.pass_lower.and(r.pass_upper);
            let digits = r.digits;
            let mut diagnostics = r.diagnostics.into_iter();
            Ok(AsymptoticRow {
                n,
                scaled: real(r.middle)?,
                distance: real(diagnostics.next().ok_or(Error::Arithmetic("missing distance"))?.1)?,
                lower: r.lower.map(real).transpose()?,
                upper: real(r.upper.ok_or(Error::Arithmetic("missing upper bound"))?)?,
                inside,
                digits,
            })
        })
        .collect()
}
