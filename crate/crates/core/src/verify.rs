//! Second differences of `log r_α(n) = (ln p̄(n) - α ln n)/n` and the
//! inequality checks built on them.
//!
//! Every difference is reported at its centre: the value written
//! `Δ²F(n-1)` is `F(n+1) + F(n-1) - 2F(n)` and is filed under `n`.
//!
//! Verdicts are strict. A bound passes when the audited margin exceeds
//! `10^(-digits/2)`, fails when it is below the negative of that, and is
//! otherwise re-evaluated at doubled precision until the escalation budget
//! runs out, after which the record is marked indeterminate.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::cmp::Ordering;

use astro_float::BigFloat;
use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::OverpartitionTable;
use crate::numerics::{Arith, AuditedReal, Auditor, PrecisionContext, MAX_ESCALATIONS};
use crate::series::{cancellation_digits, decompose_at, k1_tail, ln_main_term, mu};

mod alpha;
mod checks;
mod record;
#[cfg(test)]
mod tests;

pub use alpha::{n_alpha, threshold, AlphaParam, Threshold, ALPHA_ZERO_THRESHOLD, UPPER_BOUND_THRESHOLD};
pub use checks::{
    assemble_report, asymptotic_table, check_records, engel_logconcavity_check, run_check, AsymptoticRow, CheckKind,
};
pub use record::{CheckRecord, ClaimRecord, Quantity, RangeReport, Verdict};

/// `F(n+1) + F(n-1) - 2F(n)` from `[F(n-1), F(n), F(n+1)]`.
pub fn second_difference(a: &Arith, f: [&BigFloat; 3]) -> BigFloat {
    let [prev, mid, next] = f;
    a.sub(&a.add(next, prev), &a.mul(&a.int(2), mid))
}

pub(crate) fn max_abs(a: &Arith, v: &[BigFloat]) -> BigFloat {
    v.iter().fold(a.int(0), |m, x| a.max(&m, &a.abs(x)))
}

/// Audited second difference of `f` centred at `n`.
pub fn delta2<F>(n: u64, ctx: &PrecisionContext, mut f: F) -> Result<AuditedReal>
where
    F: FnMut(&Arith, u64) -> Result<BigFloat>,
{
    if n == 0 {
        return Err(Error::InvalidArgument("a centred difference needs n >= 1".into()));
    }
    let auditor = Auditor::new(*ctx)?;
    let mut eval = |a: &Arith| -> Result<(BigFloat, BigFloat)> {
        let v = [f(a, n - 1)?, f(a, n)?, f(a, n + 1)?];
        Ok((second_difference(a, [&v[0], &v[1], &v[2]]), max_abs(a, &v)))
    };
    let [low, high] = auditor.levels();
    let (lo, _) = eval(low)?;
    let (hi, scale) = eval(high)?;
    auditor.settle_scaled(&format!("delta2 at n={n}"), &lo, &hi, &scale)
}

/// `log r_α(n) = (ln p̄(n) - α ln n)/n`.
pub fn log_r(n: u64, alpha: &AlphaParam, table: &OverpartitionTable, ctx: &PrecisionContext) -> Result<AuditedReal> {
    if n == 0 {
        return Err(Error::InvalidArgument("log r_α(n) needs n >= 1".into()));
    }
    table.ensure_covers(n)?;
    let s = Session::new(Some(table), *ctx)?;
    s.auditor
        .evaluate(&format!("log r_{alpha}({n})"), |a| s.log_r(a, n, &alpha.to_float(a)))
}

/// `Δ² log r_α` centred at `n`.
pub fn delta2_log_r(
    n: u64,
    alpha: &AlphaParam,
    table: &OverpartitionTable,
    ctx: &PrecisionContext,
) -> Result<AuditedReal> {
    if n < 2 {
        return Err(Error::InvalidArgument("Δ² log r_α needs centre n >= 2".into()));
    }
    table.ensure_covers(n + 1)?;
    let s = Session::new(Some(table), *ctx)?;
    let [low, high] = s.auditor.levels();
    let (lo, _) = s.delta2_log_r_scaled(low, n, alpha)?;
    let (hi, scale) = s.delta2_log_r_scaled(high, n, alpha)?;
    s.auditor
        .settle_scaled(&format!("Δ² log r_{alpha} at n={n}"), &lo, &hi, &scale)
}

/// Unaudited values of one record at one precision level.
#[derive(Default)]
pub(crate) struct Sample {
    pub lower: Option<BigFloat>,
    pub middle: Option<BigFloat>,
    /// Magnitude of the terms cancelled in forming `middle`.
    pub middle_scale: Option<BigFloat>,
    pub upper: Option<BigFloat>,
    /// `(name, lhs, rhs)` asserting `lhs < rhs`.
    pub claims: Vec<(&'static str, BigFloat, BigFloat)>,
    pub diagnostics: Vec<(&'static str, BigFloat)>,
    pub regime: Option<&'static str>,
}

pub(crate) type Probe<'p> = &'p dyn Fn(&Session<'_>, &Arith, u64) -> Result<Sample>;

/// Evaluation state for one precision context: per-level caches of the
/// quantities shared between neighbouring centres.
pub(crate) struct Session<'t> {
    table: Option<&'t OverpartitionTable>,
    auditor: Auditor,
    ln_pbar: [RefCell<BTreeMap<u64, BigFloat>>; 2],
    ln_main: [RefCell<BTreeMap<u64, BigFloat>>; 2],
    decomposed: [RefCell<BTreeMap<u64, [BigFloat; 4]>>; 2],
    wide: [RefCell<BTreeMap<u32, Arith>>; 2],
}

impl<'t> Session<'t> {
    pub fn new(table: Option<&'t OverpartitionTable>, ctx: PrecisionContext) -> Result<Self> {
        Ok(Self {
            table,
            auditor: Auditor::new(ctx)?,
            ln_pbar: Default::default(),
            ln_main: Default::default(),
            decomposed: Default::default(),
            wide: Default::default(),
        })
    }

    pub fn context(&self) -> PrecisionContext {
        self.auditor.context()
    }

    fn table(&self) -> Result<&'t OverpartitionTable> {
        self.table
            .ok_or_else(|| Error::InvalidArgument("this check needs a p̄ table".into()))
    }

    pub fn ln_pbar(&self, a: &Arith, n: u64) -> Result<BigFloat> {
        if let Some(v) = self.ln_pbar[a.level()].borrow().get(&n) {
            return Ok(v.clone());
        }
        let v = a.ln_big(self.table()?.value(n)?)?;
        self.ln_pbar[a.level()].borrow_mut().insert(n, v.clone());
        Ok(v)
    }

    pub fn ln_main(&self, a: &Arith, n: u64) -> Result<BigFloat> {
        if let Some(v) = self.ln_main[a.level()].borrow().get(&n) {
            return Ok(v.clone());
        }
        let v = ln_main_term(a, n)?;
        self.ln_main[a.level()].borrow_mut().insert(n, v.clone());
        Ok(v)
    }

    /// `[T̄, R̄, ē, Ē]` at `n`, evaluated with enough digits to survive `p̄ - T̄`.
    pub fn decomposition(&self, a: &Arith, n: u64) -> Result<[BigFloat; 4]> {
        if let Some(v) = self.decomposed[a.level()].borrow().get(&n) {
            return Ok(v.clone());
        }
        let pbar = self.table()?.value(n)?;
        let extra = cancellation_digits(pbar).next_multiple_of(32);
        let mut wide = self.wide[a.level()].borrow_mut();
        if !wide.contains_key(&extra) {
            wide.insert(extra, a.widened(extra)?);
        }
        let v = decompose_at(&wide[&extra], n, pbar)?;
        drop(wide);
        self.decomposed[a.level()]
            .borrow_mut()
            .insert(n, v.clone());
        Ok(v)
    }

    pub fn log_r(&self, a: &Arith, n: u64, alpha: &BigFloat) -> Result<BigFloat> {
        let mut v = self.ln_pbar(a, n)?;
        if !alpha.is_zero() {
            v = a.sub(&v, &a.mul(alpha, &a.ln(&a.uint(n))?));
        }
        Ok(a.div(&v, &a.uint(n)))
    }

    /// The centred difference and the largest `|log r_α|` it cancels.
    pub fn delta2_log_r_scaled(&self, a: &Arith, n: u64, alpha: &AlphaParam) -> Result<(BigFloat, BigFloat)> {
        let al = alpha.to_float(a);
        let v = [self.log_r(a, n - 1, &al)?, self.log_r(a, n, &al)?, self.log_r(a, n + 1, &al)?];
        Ok((second_difference(a, [&v[0], &v[1], &v[2]]), max_abs(a, &v)))
    }

    fn decide(&self, d: &BigFloat) -> Verdict {
        let a = &self.auditor.levels()[1];
        let t = self.auditor.threshold();
        if a.cmp(d, t) == Ordering::Greater {
            Verdict::Pass
        } else if a.cmp(d, &t.neg()) == Ordering::Less {
            Verdict::Fail
        } else {
            Verdict::Indeterminate
        }
    }

    fn settle(&self, name: &str, n: u64, lo: &BigFloat, hi: &BigFloat) -> Result<AuditedReal> {
        self.auditor.settle(&format!("{name} at n={n}"), lo, hi)
    }

    fn settle_opt(
        &self,
        name: &str,
        n: u64,
        lo: &Option<BigFloat>,
        hi: &Option<BigFloat>,
    ) -> Result<Option<AuditedReal>> {
        match (lo, hi) {
            (None, None) => Ok(None),
            (Some(l), Some(h)) => self.settle(name, n, l, h).map(Some),
            _ => Err(Error::Unstable {
                expression: format!("presence of {name} at n={n}"),
                low: self.context().digits(),
                high: self.context().reference().digits(),
            }),
        }
    }

    /// `rhs - lhs` from settled values, wrapped as an audited real.
    fn gap(&self, lhs: &AuditedReal, rhs: &AuditedReal) -> Result<AuditedReal> {
        let a = &self.auditor.levels()[1];
        let d = a.sub(rhs.value(), lhs.value());
        self.auditor.settle("margin", &d, &d)
    }

    fn assemble(&self, n: u64, lo: Sample, hi: Sample) -> Result<CheckRecord> {
        let middle = match (&lo.middle, &hi.middle) {
            (Some(l), Some(h)) => match &hi.middle_scale {
                Some(scale) => self.auditor.settle_scaled(&format!("middle at n={n}"), l, h, scale)?,
                None => self.settle("middle", n, l, h)?,
            },
            _ => return Err(Error::Arithmetic("sample without a middle term")),
        };
        let lower = self.settle_opt("lower bound", n, &lo.lower, &hi.lower)?;
        let upper = self.settle_opt("upper bound", n, &lo.upper, &hi.upper)?;
        let mut margins = Vec::new();
        let mut pass_lower = Verdict::Pass;
        let mut pass_upper = Verdict::Pass;
        if let Some(l) = &lower {
            let m = self.gap(l, &middle)?;
            pass_lower = self.decide(m.value());
            margins.push(m);
        }
        if let Some(u) = &upper {
            let m = self.gap(&middle, u)?;
            pass_upper = self.decide(m.value());
            margins.push(m);
        }
        let a = &self.auditor.levels()[1];
        let margin = margins
            .into_iter()
            .reduce(|x, y| if a.cmp(x.value(), y.value()) == Ordering::Greater { y } else { x })
            .ok_or(Error::Arithmetic("record without bounds"))?;
        let mut claims = Vec::with_capacity(hi.claims.len());
        for ((name, l_lhs, l_rhs), (_, h_lhs, h_rhs)) in lo.claims.iter().zip(&hi.claims) {
            let lhs = self.settle(name, n, l_lhs, h_lhs)?;
            let rhs = self.settle(name, n, l_rhs, h_rhs)?;
            let verdict = self.decide(self.gap(&lhs, &rhs)?.value());
            claims.push(ClaimRecord {
                name,
                lhs: Quantity::Real(lhs),
                rhs: Quantity::Real(rhs),
                verdict,
            });
        }
        let mut diagnostics = Vec::with_capacity(hi.diagnostics.len());
        for ((name, l), (_, h)) in lo.diagnostics.iter().zip(&hi.diagnostics) {
            diagnostics.push((*name, Quantity::Real(self.settle(name, n, l, h)?)));
        }
        Ok(CheckRecord {
            n,
            lower: lower.map(Quantity::Real),
            middle: Quantity::Real(middle),
            upper: upper.map(Quantity::Real),
            margin: Quantity::Real(margin),
            pass_lower,
            pass_upper,
            claims,
            diagnostics,
            regime: hi.regime,
            digits: self.context().digits(),
        })
    }

    fn attempt(&self, n: u64, probe: Probe<'_>) -> Result<CheckRecord> {
        let [low, high] = self.auditor.levels();
        let lo = probe(self, low, n)?;
        let hi = probe(self, high, n)?;
        self.assemble(n, lo, hi)
    }

    /// One record, escalating precision while the outcome is undecided.
    pub fn record(&self, n: u64, probe: Probe<'_>) -> Result<CheckRecord> {
        let mut result = self.attempt(n, probe);
        let mut ctx = self.context();
        for _ in 0..MAX_ESCALATIONS {
            match &result {
                Ok(r) if r.verdict() != Verdict::Indeterminate => return result,
                Ok(_) | Err(Error::Unstable { .. }) => {}
                Err(_) => return result,
            }
            ctx = ctx.escalated();
            result = Session::new(self.table, ctx)?.attempt(n, probe);
        }
        result
    }
}

/// Exact record for `p̄(n)² >= p̄(n-1)·p̄(n+1)`; the `strict` diagnostic is 1 when the inequality is strict.
pub(crate) fn exact_logconcavity_record(table: &OverpartitionTable, n: u64, digits: u32) -> Result<CheckRecord> {
    let sq = table.value(n)? * table.value(n)?;
    let cross = table.value(n - 1)? * table.value(n + 1)?;
    let diff = BigInt::from(sq) - BigInt::from(cross);
    let verdict = match diff.sign() {
        num_bigint::Sign::Minus => Verdict::Fail,
        _ => Verdict::Pass,
    };
    let strict = BigInt::from(u8::from(diff.sign() == num_bigint::Sign::Plus));
    Ok(CheckRecord {
        n,
        lower: Some(Quantity::Exact(BigInt::from(0))),
        middle: Quantity::Exact(diff.clone()),
        upper: None,
        margin: Quantity::Exact(diff),
        pass_lower: verdict,
        pass_upper: Verdict::Pass,
        claims: Vec::new(),
        diagnostics: alloc::vec![("strict", Quantity::Exact(strict))],
        regime: None,
        digits,
    })
}

/// `1 + 3π/(4n^{5/2})`.
pub(crate) fn upper_argument(a: &Arith, n: u64) -> Result<BigFloat> {
    let lead = a.div(&a.mul(&a.int(3), &a.pi()), &a.mul(&a.int(4), &a.pow_quarters(&a.uint(n), 10)?));
    Ok(a.add(&a.int(1), &lead))
}

/// `1 + 3π/(4n^{5/2}) - (11+5α)/n^{11/4}`.
pub(crate) fn lower_argument(a: &Arith, n: u64, alpha: &AlphaParam) -> Result<BigFloat> {
    let c = a.add(&a.int(11), &a.mul(&a.int(5), &alpha.to_float(a)));
    let tail = a.div(&c, &a.pow_quarters(&a.uint(n), 11)?);
    Ok(a.sub(&upper_argument(a, n)?, &tail))
}

/// `ln` of [`lower_argument`]; `None` when the argument is not positive.
pub(crate) fn theorem_lower(a: &Arith, n: u64, alpha: &AlphaParam) -> Result<Option<BigFloat>> {
    let arg = lower_argument(a, n, alpha)?;
    if arg.is_positive() {
        Ok(Some(a.ln(&arg)?))
    } else {
        Ok(None)
    }
}

pub(crate) fn theorem_upper(a: &Arith, n: u64) -> Result<BigFloat> {
    a.ln(&upper_argument(a, n)?)
}

/// Helpers for the main-term bounds, all in terms of `μ̄(x) = π√x`.
pub(crate) mod main_term_bounds {
    use super::*;

    pub fn ln_mu(a: &Arith, x: u64) -> Result<BigFloat> {
        a.ln(&mu(a, x)?)
    }

    pub fn cube(a: &Arith, x: u64) -> BigFloat {
        a.powi(&a.uint(x), 3)
    }

    /// `3π/(4x^{5/2})`.
    pub fn g1pp(a: &Arith, x: u64) -> Result<BigFloat> {
        Ok(a.div(&a.mul(&a.int(3), &a.pi()), &a.mul(&a.int(4), &a.pow_quarters(&a.uint(x), 10)?)))
    }

    /// `9/(2x³) - 6 ln μ̄(x)/x³`.
    pub fn g2pp(a: &Arith, x: u64) -> Result<BigFloat> {
        let c = cube(a, x);
        Ok(a.sub(&a.div(&a.int(9), &a.mul(&a.int(2), &c)), &a.div(&a.mul(&a.int(6), &ln_mu(a, x)?), &c)))
    }

    /// `-5π/(4x^{5/2}(μ̄-1)) - π²/(4x²(μ̄-1)²)`.
    pub fn g3pp_rest(a: &Arith, x: u64) -> Result<BigFloat> {
        let m1 = a.sub(&mu(a, x)?, &a.int(1));
        let xf = a.uint(x);
        let p = a.pi();
        let t1 = a.div(
            &a.mul(&a.int(5), &p),
            &a.mul(&a.mul(&a.int(4), &a.pow_quarters(&xf, 10)?), &m1),
        );
        let t2 = a.div(
            &a.mul(&p, &p),
            &a.mul(&a.mul(&a.int(4), &a.mul(&xf, &xf)), &a.mul(&m1, &m1)),
        );
        Ok(a.sub(&t1.neg(), &t2))
    }

    /// `2 ln(μ̄(x)-1)/x³`.
    pub fn g3pp_log(a: &Arith, x: u64) -> Result<BigFloat> {
        let m1 = a.sub(&mu(a, x)?, &a.int(1));
        Ok(a.div(&a.mul(&a.int(2), &a.ln(&m1)?), &cube(a, x)))
    }

    /// `2 ln(π²/8)/x³`.
    pub fn g4pp(a: &Arith, x: u64) -> Result<BigFloat> {
        let p = a.pi();
        let c = a.div(&a.mul(&p, &p), &a.int(8));
        Ok(a.div(&a.mul(&a.int(2), &a.ln(&c)?), &cube(a, x)))
    }

    /// `k ln μ̄(x)/x³`.
    pub fn log_over_cube(a: &Arith, k: i64, x: u64) -> Result<BigFloat> {
        Ok(a.div(&a.mul(&a.int(k), &ln_mu(a, x)?), &cube(a, x)))
    }
}

/// `|R̄(n) - (1/8n)(1+1/μ̄)e^{-μ̄}|`, i.e. `p̄(n)` minus the whole `k = 1` term.
/// This is the `k = 3` term plus the `N = 3` truncation error.
pub(crate) fn n3_remainder(s: &Session<'_>, a: &Arith, n: u64) -> Result<BigFloat> {
    let [_, r, _, _] = s.decomposition(a, n)?;
    Ok(a.abs(&a.sub(&r, &k1_tail(a, n)?)))
}
