//! Precision-audited real arithmetic.
//!
//! Every real value the toolkit reports is computed twice, at the working
//! precision and again with one extra guard band, and is accepted only if
//! the two agree to `10^(-digits+5)` relative. This is a pragmatic stand-in
//! for interval arithmetic, not a proof of correct rounding.

mod format;

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cell::RefCell;
use core::cmp::Ordering;
use core::fmt;

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word};
use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_rational::BigRational;

use crate::error::{Error, Result};

pub use format::format_significant;

pub const DEFAULT_DIGITS: u32 = 120;
pub const DEFAULT_GUARD: u32 = 20;
pub const MIN_DIGITS: u32 = 50;
pub const MIN_GUARD: u32 = 10;
/// Verdict escalations (digits doubled each time) before giving up.
pub const MAX_ESCALATIONS: u32 = 4;

const RM: RoundingMode = RoundingMode::ToEven;

/// Binary precision that represents `digits` decimal digits.
pub fn bits_for_digits(digits: u32) -> usize {
    // 3.3220 > log2(10); one extra word of slack
    (digits as usize * 33_220).div_ceil(10_000) + 64
}

/// Decimal working precision plus guard digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    digits: u32,
    guard: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self {
            digits: DEFAULT_DIGITS,
            guard: DEFAULT_GUARD,
        }
    }
}

impl PrecisionContext {
    pub fn new(digits: u32, guard: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::Precision(alloc::format!(
                "digits must be at least {MIN_DIGITS}, got {digits}"
            )));
        }
        if guard < MIN_GUARD {
            return Err(Error::Precision(alloc::format!(
                "guard must be at least {MIN_GUARD}, got {guard}"
            )));
        }
        Ok(Self { digits, guard })
    }

    pub fn with_digits(digits: u32) -> Result<Self> {
        Self::new(digits, DEFAULT_GUARD)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn guard(&self) -> u32 {
        self.guard
    }

    /// The context used after a too-close verdict: digits doubled.
    pub fn escalated(&self) -> Self {
        Self {
            digits: self.digits * 2,
            guard: self.guard,
        }
    }

    /// The audit's reference level, one guard band above.
    pub fn reference(&self) -> Self {
        Self {
            digits: self.digits + self.guard,
            guard: self.guard,
        }
    }

    /// Verdicts must clear `10^(-verdict_exponent)`.
    pub fn verdict_exponent(&self) -> u32 {
        self.digits / 2
    }

    /// Two audit levels must agree to `10^(-audit_exponent)` relative.
    pub fn audit_exponent(&self) -> u32 {
        self.digits - 5
    }
}

impl fmt::Display for PrecisionContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{} digits", self.digits, self.guard)
    }
}

/// A value that passed the two-level audit, rounded to `context.digits()`.
#[derive(Debug, Clone)]
pub struct AuditedReal {
    value: BigFloat,
    context: PrecisionContext,
}

impl AuditedReal {
    pub fn value(&self) -> &BigFloat {
        &self.value
    }

    pub fn context(&self) -> PrecisionContext {
        self.context
    }

    pub fn signum(&self) -> Ordering {
        if self.value.is_zero() {
            Ordering::Equal
        } else if self.value.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    /// Scientific notation with `sig` significant digits.
    pub fn to_string_sig(&self, sig: usize) -> String {
        format_significant(&self.value, sig)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_string_sig(17).parse().unwrap_or(f64::NAN)
    }

    /// `|self - other| <= 10^(-exponent) * max(|self|, |other|)`.
    pub fn agrees_with(&self, other: &AuditedReal, exponent: u32) -> bool {
        let p = bits_for_digits(self.context.digits.max(other.context.digits) + 10);
        relatively_close(&self.value, &other.value, &pow10_neg(exponent, p), p)
    }
}

impl fmt::Display for AuditedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = (self.context.digits as usize).min(40);
        f.write_str(&self.to_string_sig(sig))
    }
}

/// `10^(-e)` at `p` bits.
fn pow10_neg(e: u32, p: usize) -> BigFloat {
    BigFloat::from_u64(10, p).powi(e as usize, p, RM).reciprocal(p, RM)
}

fn relatively_close(a: &BigFloat, b: &BigFloat, tol: &BigFloat, p: usize) -> bool {
    close_at_scale(a, b, &BigFloat::from_u8(0, p), tol, p)
}

/// `|a - b| <= tol * max(|a|, |b|, |scale|)`.
fn close_at_scale(a: &BigFloat, b: &BigFloat, scale: &BigFloat, tol: &BigFloat, p: usize) -> bool {
    if a.is_zero() && b.is_zero() {
        return true;
    }
    let diff = a.sub(b, p, RM).abs();
    let scale = a.abs().max(&b.abs()).max(&scale.abs());
    diff <= scale.mul(tol, p, RM)
}

/// Real arithmetic at one fixed binary precision.
///
/// Holds the constants cache behind a `RefCell`, so every method takes
/// `&self` and expressions can nest freely. Not `Sync`; build one per thread.
pub struct Arith {
    digits: u32,
    bits: usize,
    level: usize,
    consts: RefCell<Consts>,
    pi: BigFloat,
    ln2: BigFloat,
}

impl fmt::Debug for Arith {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Arith")
            .field("digits", &self.digits)
            .field("bits", &self.bits)
            .field("level", &self.level)
            .finish()
    }
}

impl Arith {
    /// Arithmetic targeting `digits` digits, carried internally at `digits + guard`.
    pub fn new(digits: u32, guard: u32) -> Result<Self> {
        Self::with_bits(digits, bits_for_digits(digits + guard), 0)
    }

    pub fn for_context(ctx: &PrecisionContext) -> Result<Self> {
        Self::new(ctx.digits, ctx.guard)
    }

    fn with_bits(digits: u32, bits: usize, level: usize) -> Result<Self> {
        let mut consts = Consts::new().map_err(|_| Error::Arithmetic("constants cache"))?;
        let pi = consts.pi(bits, RM);
        let ln2 = consts.ln_2(bits, RM);
        Ok(Self {
            digits,
            bits,
            level,
            consts: RefCell::new(consts),
            pi,
            ln2,
        })
    }

    /// Same target, `extra` more internal digits; for expressions with known cancellation.
    pub fn widened(&self, extra: u32) -> Result<Self> {
        Self::with_bits(
            self.digits,
            self.bits + bits_for_digits(extra) - 64,
            self.level,
        )
    }

    fn at_level(mut self, level: usize) -> Self {
        self.level = level;
        self
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    /// Which audit level this instance evaluates (0 = working, 1 = reference).
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn int(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.bits)
    }

    pub fn uint(&self, v: u64) -> BigFloat {
        BigFloat::from_u64(v, self.bits)
    }

    pub fn ratio(&self, num: i64, den: i64) -> BigFloat {
        self.div(&self.int(num), &self.int(den))
    }

    /// Nearest representable value of an exact big integer.
    pub fn big_uint(&self, v: &BigUint) -> BigFloat {
        let words: Vec<Word> = biguint_words(v);
        if words.is_empty() {
            return self.int(0);
        }
        let e = (words.len() * Word::BITS as usize) as i32;
        let mut x = BigFloat::from_words(&words, Sign::Pos, e);
        let _ = x.set_precision(self.bits, RM);
        x
    }

    pub fn big_int(&self, v: &BigInt) -> BigFloat {
        let x = self.big_uint(v.magnitude());
        if v.sign() == BigSign::Minus {
            x.neg()
        } else {
            x
        }
    }

    pub fn big_ratio(&self, v: &BigRational) -> BigFloat {
        self.div(&self.big_int(v.numer()), &self.big_int(v.denom()))
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, RM)
    }

    /// Division; a zero divisor yields NaN, which the audit rejects.
    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.bits, RM)
    }

    pub fn powi(&self, a: &BigFloat, n: usize) -> BigFloat {
        a.powi(n, self.bits, RM)
    }

    pub fn pi(&self) -> BigFloat {
        self.pi.clone()
    }

    pub fn ln2(&self) -> BigFloat {
        self.ln2.clone()
    }

    pub fn sqrt(&self, x: &BigFloat) -> Result<BigFloat> {
        if x.is_negative() || x.is_nan() {
            return Err(Error::Domain { function: "sqrt" });
        }
        finite(x.sqrt(self.bits, RM), "sqrt")
    }

    /// `x^(quarters/4)` for `x > 0` via repeated square roots.
    pub fn pow_quarters(&self, x: &BigFloat, quarters: u32) -> Result<BigFloat> {
        let root = self.sqrt(x)?;
        let fourth = self.sqrt(&root)?;
        let whole = self.powi(x, (quarters / 4) as usize);
        let mut out = whole;
        if quarters % 4 >= 2 {
            out = self.mul(&out, &root);
        }
        if quarters % 2 == 1 {
            out = self.mul(&out, &fourth);
        }
        Ok(out)
    }

    pub fn exp(&self, x: &BigFloat) -> Result<BigFloat> {
        finite(x.exp(self.bits, RM, &mut self.consts.borrow_mut()), "exp")
    }

    pub fn ln(&self, x: &BigFloat) -> Result<BigFloat> {
        if !x.is_positive() || x.is_zero() {
            return Err(Error::Domain { function: "ln" });
        }
        finite(x.ln(self.bits, RM, &mut self.consts.borrow_mut()), "ln")
    }

    pub fn sinh(&self, x: &BigFloat) -> Result<BigFloat> {
        finite(x.sinh(self.bits, RM, &mut self.consts.borrow_mut()), "sinh")
    }

    pub fn cosh(&self, x: &BigFloat) -> Result<BigFloat> {
        finite(x.cosh(self.bits, RM, &mut self.consts.borrow_mut()), "cosh")
    }

    pub fn sin(&self, x: &BigFloat) -> Result<BigFloat> {
        finite(x.sin(self.bits, RM, &mut self.consts.borrow_mut()), "sin")
    }

    pub fn cos(&self, x: &BigFloat) -> Result<BigFloat> {
        finite(x.cos(self.bits, RM, &mut self.consts.borrow_mut()), "cos")
    }

    /// Natural log of a positive integer: `ln m + bits(p)·ln 2` with the
    /// mantissa `m = p / 2^bits(p)` in `[1/2, 1)`.
    pub fn ln_big(&self, p: &BigUint) -> Result<BigFloat> {
        let words = biguint_words(p);
        if words.is_empty() {
            return Err(Error::Domain { function: "ln_big" });
        }
        let bit_len = p.bits();
        let mut mantissa = BigFloat::from_words(&words, Sign::Pos, 0);
        mantissa.set_exponent(0);
        let _ = mantissa.set_precision(self.bits, RM);
        let scale = self.mul(&self.uint(bit_len), &self.ln2);
        Ok(self.add(&self.ln(&mantissa)?, &scale))
    }

    pub fn cmp(&self, a: &BigFloat, b: &BigFloat) -> Ordering {
        a.partial_cmp(b).unwrap_or(Ordering::Equal)
    }

    pub fn abs(&self, a: &BigFloat) -> BigFloat {
        a.abs()
    }

    pub fn max(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.max(b)
    }

    pub fn min(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.min(b)
    }

    /// `10^(-e)` at this precision.
    pub fn pow10_neg(&self, e: u32) -> BigFloat {
        pow10_neg(e, self.bits)
    }

    pub fn floor(&self, x: &BigFloat) -> BigFloat {
        x.floor()
    }

    pub fn ceil(&self, x: &BigFloat) -> BigFloat {
        x.ceil()
    }
}

fn finite(x: BigFloat, what: &'static str) -> Result<BigFloat> {
    if x.is_nan() || x.is_inf() {
        Err(Error::Arithmetic(what))
    } else {
        Ok(x)
    }
}

fn biguint_words(v: &BigUint) -> Vec<Word> {
    #[allow(clippy::useless_conversion)]
    v.iter_u64_digits().map(|d| d as Word).collect()
}

/// The integer part of `x` as an exact integer.
pub fn to_big_int(x: &BigFloat) -> Option<BigInt> {
    let t = x.int();
    if t.is_zero() {
        return Some(BigInt::from(0));
    }
    let (words, _, sign, e, _) = t.as_raw_parts()?;
    let mut m = BigUint::from(0u32);
    for &w in words.iter().rev() {
        m = (m << Word::BITS) + BigUint::from(w);
    }
    // value = m * 2^(e - total_bits)
    let total = (words.len() * Word::BITS as usize) as i64;
    let shift = i64::from(e) - total;
    let magnitude = if shift >= 0 {
        m << shift as u64
    } else {
        m >> (-shift) as u64
    };
    let v = BigInt::from(magnitude);
    Some(if sign == Sign::Neg { -v } else { v })
}

/// Evaluates expressions at the working level and the reference level.
pub struct Auditor {
    ctx: PrecisionContext,
    levels: [Arith; 2],
    tolerance: BigFloat,
    threshold: BigFloat,
    compare_bits: usize,
}

impl fmt::Debug for Auditor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Auditor").field("ctx", &self.ctx).finish()
    }
}

impl Auditor {
    pub fn new(ctx: PrecisionContext) -> Result<Self> {
        let reference = ctx.reference();
        let working = Arith::for_context(&ctx)?.at_level(0);
        let high = Arith::for_context(&reference)?.at_level(1);
        let compare_bits = high.bits();
        Ok(Self {
            ctx,
            tolerance: pow10_neg(ctx.audit_exponent(), compare_bits),
            threshold: pow10_neg(ctx.verdict_exponent(), compare_bits),
            levels: [working, high],
            compare_bits,
        })
    }

    pub fn context(&self) -> PrecisionContext {
        self.ctx
    }

    pub fn levels(&self) -> &[Arith; 2] {
        &self.levels
    }

    /// Decision threshold `10^(-digits/2)`.
    pub fn threshold(&self) -> &BigFloat {
        &self.threshold
    }

    /// Accept a pair of evaluations of `expression`, keeping the reference one.
    pub fn settle(&self, expression: &str, low: &BigFloat, high: &BigFloat) -> Result<AuditedReal> {
        self.settle_scaled(expression, low, high, &BigFloat::from_u8(0, self.compare_bits))
    }

    /// Like [`Auditor::settle`], but for a value formed by cancelling terms of
    /// magnitude up to `scale`: agreement is judged relative to that magnitude,
    /// so a difference that is exactly zero still settles.
    pub fn settle_scaled(
        &self,
        expression: &str,
        low: &BigFloat,
        high: &BigFloat,
        scale: &BigFloat,
    ) -> Result<AuditedReal> {
        if low.is_nan() || high.is_nan() || low.is_inf() || high.is_inf() {
            return Err(Error::Arithmetic("non-finite audited value"));
        }
        if !close_at_scale(low, high, scale, &self.tolerance, self.compare_bits) {
            return Err(Error::Unstable {
                expression: expression.to_string(),
                low: self.ctx.digits,
                high: self.ctx.reference().digits,
            });
        }
        let mut value = high.clone();
        let _ = value.set_precision(bits_for_digits(self.ctx.digits), RM);
        Ok(AuditedReal {
            value,
            context: self.ctx,
        })
    }

    pub fn evaluate<F>(&self, expression: &str, mut f: F) -> Result<AuditedReal>
    where
        F: FnMut(&Arith) -> Result<BigFloat>,
    {
        let low = f(&self.levels[0])?;
        let high = f(&self.levels[1])?;
        self.settle(expression, &low, &high)
    }

    /// Audits a fixed-length vector of named quantities evaluated together.
    pub fn evaluate_many<F>(&self, names: &[&str], mut f: F) -> Result<Vec<AuditedReal>>
    where
        F: FnMut(&Arith) -> Result<Vec<BigFloat>>,
    {
        let low = f(&self.levels[0])?;
        let high = f(&self.levels[1])?;
        debug_assert_eq!(low.len(), names.len());
        low.iter()
            .zip(&high)
            .zip(names)
            .map(|((l, h), name)| self.settle(name, l, h))
            .collect()
    }
}

/// One-shot audit of `f` under `ctx`.
pub fn audit<F>(ctx: &PrecisionContext, expression: &str, f: F) -> Result<AuditedReal>
where
    F: FnMut(&Arith) -> Result<BigFloat>,
{
    Auditor::new(*ctx)?.evaluate(expression, f)
}

pub fn pi(ctx: &PrecisionContext) -> Result<AuditedReal> {
    audit(ctx, "pi", |a| Ok(a.pi()))
}

pub fn exp(x: &BigFloat, ctx: &PrecisionContext) -> Result<AuditedReal> {
    audit(ctx, "exp", |a| a.exp(x))
}

pub fn ln(x: &BigFloat, ctx: &PrecisionContext) -> Result<AuditedReal> {
    audit(ctx, "ln", |a| a.ln(x))
}

pub fn sinh(x: &BigFloat, ctx: &PrecisionContext) -> Result<AuditedReal> {
    audit(ctx, "sinh", |a| a.sinh(x))
}

pub fn cosh(x: &BigFloat, ctx: &PrecisionContext) -> Result<AuditedReal> {
    audit(ctx, "cosh", |a| a.cosh(x))
}

pub fn sqrt(x: &BigFloat, ctx: &PrecisionContext) -> Result<AuditedReal> {
    audit(ctx, "sqrt", |a| a.sqrt(x))
}

pub fn ln_big(p: &BigUint, ctx: &PrecisionContext) -> Result<AuditedReal> {
    audit(ctx, "ln_big", |a| a.ln_big(p))
}

#[cfg(test)]
mod tests;
