//! The Zuckerman series for `p̄(n)`, Engel's truncation bound, and the
//! main-term/remainder split used by the verifier.
//!
//! ```text
//! p̄(n) = 1/(2π) Σ_{k odd} √k Σ_{(h,k)=1} ω(h,k)²/ω(2h,k) e^{-2πinh/k} D(n,k)
//! D(n,k) = d/dn (sinh(π√n/k)/√n) = π/(2kn)·cosh(π√n/k) - sinh(π√n/k)/(2n^{3/2})
//! ```
//!
//! Root-of-unity weights are kept as exact rational exponents (`ω = e^{iπr}`);
//! only the assembled h-sum is evaluated in floating point.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::cell::RefCell;

use astro_float::BigFloat;
use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::exact::OverpartitionTable;
use crate::numerics::{to_big_int, Arith, AuditedReal, Auditor, PrecisionContext};

/// Largest `k` accepted by the exact exponent arithmetic.
pub const MAX_K: u64 = 1_000_000;

/// `ω(h,k) = e^{iπr}` with `r` exact and reduced to `[0, 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OmegaExponent {
    h: u64,
    k: u64,
    r: Ratio<i64>,
}

impl OmegaExponent {
    pub fn h(&self) -> u64 {
        self.h
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn exponent(&self) -> Ratio<i64> {
        self.r
    }

    /// `(cos πr, sin πr)`.
    pub fn evaluate(&self, a: &Arith) -> Result<(BigFloat, BigFloat)> {
        let theta = a.mul(&a.pi(), &a.ratio(*self.r.numer(), *self.r.denom()));
        Ok((a.cos(&theta)?, a.sin(&theta)?))
    }
}

/// `Σ_{j=1}^{k-1} j·(2·(hj mod k) - k)`, so that the defining sum equals this over `2k²`.
fn dedekind_numerator(h: u64, k: u64) -> i128 {
    let (h, k) = (h as i128, k as i128);
    (1..k).map(|j| j * (2 * ((h * j) % k) - k)).sum()
}

/// `numerator / (2k²)` reduced mod 2.
fn exponent_mod_two(numerator: i128, k: u64) -> Ratio<i64> {
    let den = 2 * (k as i128) * (k as i128);
    let reduced = numerator.rem_euclid(2 * den);
    Ratio::new(reduced as i64, den as i64)
}

fn check_modulus(k: u64) -> Result<()> {
    if k == 0 || k % 2 == 0 {
        return Err(Error::InvalidArgument(format!("k must be odd and positive, got {k}")));
    }
    if k > MAX_K {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds {MAX_K}")));
    }
    Ok(())
}

/// Exact exponent of `ω(h,k)` from its defining sum.
pub fn omega_exponent(h: u64, k: u64) -> Result<OmegaExponent> {
    check_modulus(k)?;
    if h >= k {
        return Err(Error::InvalidArgument(format!("h = {h} must be below k = {k}")));
    }
    if h.gcd(&k) != 1 {
        return Err(Error::InvalidArgument(format!("gcd({h}, {k}) != 1")));
    }
    Ok(OmegaExponent {
        h,
        k,
        r: exponent_mod_two(dedekind_numerator(h, k), k),
    })
}

/// Exponent of `ω(h,k)²/ω(2h mod k, k)` as a numerator over `2k²`, mod `4k²`.
fn base_weight_numerator(h: u64, k: u64) -> i128 {
    let four_k2 = 4 * (k as i128) * (k as i128);
    (2 * dedekind_numerator(h, k) - dedekind_numerator((2 * h) % k, k)).rem_euclid(four_k2)
}

/// Exponent of the full h-summand `ω(h,k)²/ω(2h,k)·e^{-2πinh/k}`, reduced mod 2.
pub fn weight_exponent(h: u64, k: u64, n: u64) -> Result<Ratio<i64>> {
    omega_exponent(h, k)?;
    let shift = 4 * (k as i128) * (((h as i128) * ((n % k) as i128)) % k as i128);
    Ok(exponent_mod_two(base_weight_numerator(h, k) - shift, k))
}

/// Smallest odd integer `>= ⌈√n⌉`.
pub fn default_terms(n: u64) -> u64 {
    let mut root = n.sqrt();
    if root * root < n {
        root += 1;
    }
    if root % 2 == 0 {
        root + 1
    } else {
        root.max(1)
    }
}

/// `μ̄(n) = π√n`.
pub fn mu(a: &Arith, n: u64) -> Result<BigFloat> {
    Ok(a.mul(&a.pi(), &a.sqrt(&a.uint(n))?))
}

/// `D(n,k) = π/(2kn)·cosh(π√n/k) - sinh(π√n/k)/(2n^{3/2})`.
pub fn kernel_derivative(a: &Arith, n: u64, k: u64) -> Result<BigFloat> {
    let nf = a.uint(n);
    let root = a.sqrt(&nf)?;
    let x = a.div(&a.mul(&a.pi(), &root), &a.uint(k));
    let ex = a.exp(&x)?;
    let ex_inv = a.div(&a.int(1), &ex);
    let two = a.int(2);
    let cosh = a.div(&a.add(&ex, &ex_inv), &two);
    let sinh = if x >= a.int(1) {
        a.div(&a.sub(&ex, &ex_inv), &two)
    } else {
        a.sinh(&x)?
    };
    let first = a.div(&a.mul(&a.pi(), &cosh), &a.mul(&a.uint(2 * k), &nf));
    let second = a.div(&sinh, &a.mul(&two, &a.mul(&nf, &root)));
    Ok(a.sub(&first, &second))
}

/// Engel's bound `N^{5/2}/(π n^{3/2}) · sinh(π√n/N)` on the truncation error.
pub fn engel_radius(a: &Arith, n: u64, terms: u64) -> Result<BigFloat> {
    let nf = a.uint(n);
    let big_n = a.uint(terms);
    let num = a.pow_quarters(&big_n, 10)?;
    let den = a.mul(&a.pi(), &a.pow_quarters(&nf, 6)?);
    let arg = a.div(&a.mul(&a.pi(), &a.sqrt(&nf)?), &big_n);
    Ok(a.mul(&a.div(&num, &den), &a.sinh(&arg)?))
}

/// `T̄(n) = (π²/8)/μ̄² · (1 - 1/μ̄) · e^{μ̄}`.
pub fn main_term(a: &Arith, n: u64) -> Result<BigFloat> {
    let m = mu(a, n)?;
    let c = a.div(&a.mul(&a.pi(), &a.pi()), &a.int(8));
    let one = a.int(1);
    let factor = a.sub(&one, &a.div(&one, &m));
    Ok(a.mul(&a.div(&c, &a.mul(&m, &m)), &a.mul(&factor, &a.exp(&m)?)))
}

/// `ln T̄(n) = ln(π²/8) - 2 ln μ̄ + ln(1 - 1/μ̄) + μ̄`.
pub fn ln_main_term(a: &Arith, n: u64) -> Result<BigFloat> {
    let m = mu(a, n)?;
    let c = a.div(&a.mul(&a.pi(), &a.pi()), &a.int(8));
    let one = a.int(1);
    let lm = a.ln(&m)?;
    let parts = [
        a.ln(&c)?,
        a.mul(&a.int(-2), &lm),
        a.ln(&a.sub(&one, &a.div(&one, &m)))?,
        m,
    ];
    Ok(parts.iter().fold(a.int(0), |acc, x| a.add(&acc, x)))
}

/// The `e^{-μ̄}` part of the `k = 1` term: `(1/8n)(1 + 1/μ̄) e^{-μ̄}`.
pub fn k1_tail(a: &Arith, n: u64) -> Result<BigFloat> {
    let m = mu(a, n)?;
    let one = a.int(1);
    let factor = a.add(&one, &a.div(&one, &m));
    let e = a.exp(&m.neg())?;
    Ok(a.div(&a.mul(&factor, &e), &a.uint(8 * n)))
}

/// `(9√3/(2n·μ̄)) e^{μ̄/3}`, the `N = 3` case of Engel's bound after `sinh x < e^x/2`.
pub fn engel_n3_bound(a: &Arith, n: u64) -> Result<BigFloat> {
    let m = mu(a, n)?;
    let num = a.mul(&a.int(9), &a.sqrt(&a.int(3))?);
    let den = a.mul(&a.uint(2 * n), &m);
    Ok(a.mul(&a.div(&num, &den), &a.exp(&a.div(&m, &a.int(3)))?))
}

/// Truncated series value with Engel's error radius.
#[derive(Debug, Clone)]
pub struct CertifiedEstimate {
    pub n: u64,
    pub terms: u64,
    pub value: AuditedReal,
    pub error_radius: AuditedReal,
}

impl CertifiedEstimate {
    fn arith(&self) -> Result<Arith> {
        let ctx = self.value.context();
        Arith::new(ctx.digits(), ctx.guard())
    }

    /// `|value - exact| < error_radius`.
    pub fn contains(&self, exact: &BigUint) -> Result<bool> {
        let a = self.arith()?;
        let diff = a.abs(&a.sub(self.value.value(), &a.big_uint(exact)));
        Ok(diff < *self.error_radius.value())
    }

    /// `|value - exact|`.
    pub fn deviation(&self, exact: &BigUint) -> Result<BigFloat> {
        let a = self.arith()?;
        Ok(a.abs(&a.sub(self.value.value(), &a.big_uint(exact))))
    }

    /// Nearest integer to the value.
    pub fn rounded(&self) -> Result<BigInt> {
        let a = self.arith()?;
        let shifted = a.add(self.value.value(), &a.ratio(1, 2));
        to_big_int(&a.floor(&shifted)).ok_or(Error::Arithmetic("rounding"))
    }

    /// The radius is below 1/2, so rounding the value determines `p̄(n)`.
    pub fn determines_integer(&self) -> Result<bool> {
        let a = self.arith()?;
        Ok(*self.error_radius.value() < a.ratio(1, 2))
    }
}

type SumCache = RefCell<BTreeMap<(u64, u64), BigFloat>>;

/// Zuckerman-series evaluator that caches h-sums across calls.
///
/// The h-sum for modulus `k` depends on `n` only through `n mod k`, so it is
/// computed once per residue and audit level.
pub struct ZuckermanSeries {
    auditor: Auditor,
    weights: RefCell<BTreeMap<u64, Vec<(u64, i128)>>>,
    sums: [SumCache; 2],
}

impl ZuckermanSeries {
    pub fn new(ctx: PrecisionContext) -> Result<Self> {
        Ok(Self {
            auditor: Auditor::new(ctx)?,
            weights: RefCell::new(BTreeMap::new()),
            sums: Default::default(),
        })
    }

    pub fn context(&self) -> PrecisionContext {
        self.auditor.context()
    }

    fn base_weights(&self, k: u64) -> Vec<(u64, i128)> {
        self.weights
            .borrow_mut()
            .entry(k)
            .or_insert_with(|| {
                (0..k)
                    .filter(|h| h.gcd(&k) == 1)
                    .map(|h| (h, base_weight_numerator(h, k)))
                    .collect()
            })
            .clone()
    }

    /// Real part of `Σ_h ω(h,k)²/ω(2h,k) e^{-2πinh/k}`; the imaginary part must vanish.
    fn h_sum(&self, a: &Arith, n: u64, k: u64) -> Result<BigFloat> {
        let residue = n % k;
        if let Some(v) = self.sums[a.level()].borrow().get(&(k, residue)) {
            return Ok(v.clone());
        }
        let k2 = (k as i128) * (k as i128);
        let (mut re, mut im) = (a.int(0), a.int(0));
        let weights = self.base_weights(k);
        let step = a.div(&a.pi(), &a.big_int(&BigInt::from(2 * k2)));
        for &(h, base) in &weights {
            let shift = 4 * (k as i128) * (((h as i128) * (residue as i128)) % k as i128);
            let mut w = (base - shift).rem_euclid(4 * k2);
            if w > 2 * k2 {
                w -= 4 * k2;
            }
            let theta = a.mul(&step, &a.big_int(&BigInt::from(w)));
            re = a.add(&re, &a.cos(&theta)?);
            im = a.add(&im, &a.sin(&theta)?);
        }
        let tol = a.mul(&a.pow10_neg(a.digits() - 5), &a.uint(weights.len() as u64));
        if a.abs(&im) > tol {
            return Err(Error::NonReal { n, k });
        }
        // a cancelling sum of roots of unity is exactly zero; keep rounding noise out of the audit
        if a.abs(&re) <= tol {
            re = a.int(0);
        }
        self.sums[a.level()]
            .borrow_mut()
            .insert((k, residue), re.clone());
        Ok(re)
    }

    fn term_at(&self, a: &Arith, n: u64, k: u64) -> Result<BigFloat> {
        let s = self.h_sum(a, n, k)?;
        let coeff = a.div(&a.sqrt(&a.uint(k))?, &a.mul(&a.int(2), &a.pi()));
        Ok(a.mul(&a.mul(&coeff, &s), &kernel_derivative(a, n, k)?))
    }

    fn check_n(n: u64) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidArgument("the series is evaluated for n >= 1".into()));
        }
        Ok(())
    }

    /// The `k`-th term of the series at `n`.
    pub fn term(&self, n: u64, k: u64) -> Result<AuditedReal> {
        Self::check_n(n)?;
        check_modulus(k)?;
        self.auditor
            .evaluate(&format!("zuckerman_term(n={n}, k={k})"), |a| self.term_at(a, n, k))
    }

    /// Sum over odd `k <= terms`, with Engel's radius for that truncation.
    pub fn estimate(&self, n: u64, terms: u64) -> Result<CertifiedEstimate> {
        Self::check_n(n)?;
        if terms == 0 || terms > MAX_K {
            return Err(Error::InvalidArgument(format!(
                "truncation bound must be in 1..={MAX_K}, got {terms}"
            )));
        }
        let value = self
            .auditor
            .evaluate(&format!("zuckerman_estimate(n={n}, N={terms})"), |a| {
                (1..=terms)
                    .step_by(2)
                    .try_fold(a.int(0), |acc, k| Ok(a.add(&acc, &self.term_at(a, n, k)?)))
            })?;
        let error_radius = self
            .auditor
            .evaluate(&format!("engel_radius(n={n}, N={terms})"), |a| {
                engel_radius(a, n, terms)
            })?;
        Ok(CertifiedEstimate {
            n,
            terms,
            value,
            error_radius,
        })
    }
}

pub fn zuckerman_term(n: u64, k: u64, ctx: &PrecisionContext) -> Result<AuditedReal> {
    ZuckermanSeries::new(*ctx)?.term(n, k)
}

pub fn zuckerman_estimate(n: u64, terms: u64, ctx: &PrecisionContext) -> Result<CertifiedEstimate> {
    ZuckermanSeries::new(*ctx)?.estimate(n, terms)
}

/// `p̄(n) = T̄(n)(1 + ē(n))`, with `R̄ = p̄ - T̄`, `ē = R̄/T̄` and `Ē = ln(1 + ē)`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub n: u64,
    pub main_term: AuditedReal,
    pub remainder: AuditedReal,
    pub relative: AuditedReal,
    pub log_ratio: AuditedReal,
}

/// Extra internal digits that absorb the cancellation in `p̄(n) - T̄(n)`.
pub fn cancellation_digits(pbar: &BigUint) -> u32 {
    // |R̄/p̄| is about p̄^(-2/3); twice the digit count of p̄ covers it
    let digits = (pbar.bits() as u32 * 3) / 10 + 1;
    2 * digits + 10
}

/// `[T̄, R̄, ē, Ē]` at `wide`, which must already carry [`cancellation_digits`].
pub fn decompose_at(wide: &Arith, n: u64, pbar: &BigUint) -> Result<[BigFloat; 4]> {
    let t = main_term(wide, n)?;
    let r = wide.sub(&wide.big_uint(pbar), &t);
    let e = wide.div(&r, &t);
    let one_plus = wide.add(&wide.int(1), &e);
    let big_e = wide.ln(&one_plus)?;
    Ok([t, r, e, big_e])
}

pub fn decompose(n: u64, table: &OverpartitionTable, ctx: &PrecisionContext) -> Result<Decomposition> {
    if n == 0 {
        return Err(Error::InvalidArgument("T̄(0) is singular; decompose needs n >= 1".into()));
    }
    let pbar = table.value(n)?;
    let auditor = Auditor::new(*ctx)?;
    let extra = cancellation_digits(pbar);
    let [low, high] = auditor.levels();
    let lo = decompose_at(&low.widened(extra)?, n, pbar)?;
    let hi = decompose_at(&high.widened(extra)?, n, pbar)?;
    let names = ["T̄(n)", "R̄(n)", "ē(n)", "Ē(n)"];
    let mut out = lo
        .iter()
        .zip(&hi)
        .zip(names)
        .map(|((l, h), name)| auditor.settle(&format!("{name} at n={n}"), l, h));
    Ok(Decomposition {
        n,
        main_term: out.next().unwrap()?,
        remainder: out.next().unwrap()?,
        relative: out.next().unwrap()?,
        log_ratio: out.next().unwrap()?,
    })
}
