use alloc::format;
use alloc::string::String;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numerics::{to_big_int, Arith};

/// The exponent `α ≥ 0` in `r_α(n) = (p̄(n)/n^α)^(1/n)`, kept exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlphaParam(BigRational);

impl AlphaParam {
    pub fn new(value: BigRational) -> Result<Self> {
        if value.is_negative() {
            return Err(Error::InvalidArgument(format!("alpha must be nonnegative, got {value}")));
        }
        Ok(Self(value))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn from_integer(v: u64) -> Self {
        Self(BigRational::from_integer(v.into()))
    }

    pub fn ratio(num: u64, den: u64) -> Self {
        Self(BigRational::new(num.into(), den.into()))
    }

    /// Parses `3`, `0.25`, `1/2` or `1.5e-3`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse alpha from {text:?}"));
        let s = text.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num: BigInt = num.trim().parse().map_err(|_| bad())?;
            let den: BigInt = den.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            return Self::new(BigRational::new(num, den));
        }
        let (mantissa, exp) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        let digits: String = int_part.chars().chain(frac_part.chars()).collect();
        let negative = digits.starts_with('-');
        let body = digits.trim_start_matches(['-', '+']);
        if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let mut value = BigRational::from_integer(body.parse::<BigInt>().map_err(|_| bad())?);
        let scale = exp - frac_part.len() as i32;
        let ten = BigRational::from_integer(10.into());
        let factor = num_traits::pow(ten, scale.unsigned_abs() as usize);
        if scale >= 0 {
            value *= factor;
        } else {
            value /= factor;
        }
        if negative {
            value = -value;
        }
        Self::new(value)
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_float(&self, a: &Arith) -> astro_float::BigFloat {
        a.big_ratio(&self.0)
    }
}

impl fmt::Display for AlphaParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Ingredients of the starting index `N(α)` of the two-sided bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Threshold {
    /// `⌊3490/α⌋ + 2`, with the bracket read as floor; `None` for `α = 0`.
    pub reciprocal_term: Option<u64>,
    /// `⌈(4(11+5α)/(3π))⁴⌉`.
    pub quartic_term: u64,
    pub value: u64,
}

impl Threshold {
    /// `max{⌊3490/α⌋ + 2, 4522}`, the start of the lower-bound regime for the remainder terms.
    pub fn n1(&self) -> u64 {
        self.reciprocal_term.unwrap_or(0).max(4522)
    }
}

pub const ALPHA_ZERO_THRESHOLD: u64 = 4522;
pub const UPPER_BOUND_THRESHOLD: u64 = 4021;
const FLOOR_FLOOR: u64 = 5505;

/// `⌈(4(11+5α)/(3π))⁴⌉` evaluated with ample precision.
fn quartic_term(alpha: &AlphaParam) -> Result<u64> {
    let a = Arith::new(100, 20)?;
    let base = a.div(
        &a.mul(&a.int(4), &a.add(&a.int(11), &a.mul(&a.int(5), &alpha.to_float(&a)))),
        &a.mul(&a.int(3), &a.pi()),
    );
    let q = a.powi(&base, 4);
    to_big_int(&a.ceil(&q))
        .and_then(|v| v.to_u64())
        .ok_or_else(|| Error::InvalidArgument(format!("N(α) overflows for α = {alpha}")))
}

pub fn threshold(alpha: &AlphaParam) -> Result<Threshold> {
    let quartic = quartic_term(alpha)?;
    if alpha.is_zero() {
        return Ok(Threshold {
            reciprocal_term: None,
            quartic_term: quartic,
            value: ALPHA_ZERO_THRESHOLD,
        });
    }
    let recip = (BigRational::from_integer(3490.into()) / alpha.value()).floor();
    let recip = recip
        .to_integer()
        .to_u64()
        .and_then(|v| v.checked_add(2))
        .ok_or_else(|| Error::InvalidArgument(format!("N(α) overflows for α = {alpha}")))?;
    Ok(Threshold {
        reciprocal_term: Some(recip),
        quartic_term: quartic,
        value: recip.max(quartic).max(FLOOR_FLOOR),
    })
}

/// `N(α)`: 4522 for `α = 0`, else `max{⌊3490/α⌋+2, ⌈(4(11+5α)/(3π))⁴⌉, 5505}`.
pub fn n_alpha(alpha: &AlphaParam) -> Result<u64> {
    Ok(threshold(alpha)?.value)
}
