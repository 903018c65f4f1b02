//! Exact values of the overpartition function.
//!
//! Three independent routes are provided: a literal enumeration oracle for
//! small `n`, coefficient extraction from `∏ (1 + q^k)/(1 - q^k)`, and the
//! recurrence `p̄(n) = 2 Σ_{j≥1} (-1)^(j+1) p̄(n - j²)` that follows from
//! `Σ_n p̄(n) q^n = 1 / Σ_{j∈ℤ} (-q)^(j²)`.

mod text;

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub use text::{decode_table, encode_table, TABLE_MAGIC};

/// Largest `n` accepted by [`enumerate_overpartitions`].
pub const ENUMERATION_CAP: u64 = 40;

/// Modulus of the table checksum, `2^61 - 1`.
pub const CHECKSUM_MODULUS: u64 = (1 << 61) - 1;

/// How a table was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Series,
    Sparse,
    /// Sparse recurrence, adopted after an entrywise match with the series product.
    Merged,
    /// Read back from a cache file and validated against its checksum.
    Cached,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Series => "series",
            Provenance::Sparse => "sparse",
            Provenance::Merged => "merged",
            Provenance::Cached => "cached",
        }
    }
}

/// `p̄(0), ..., p̄(n_max)` as exact integers. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverpartitionTable {
    values: Vec<BigUint>,
    provenance: Provenance,
}

impl OverpartitionTable {
    /// Wraps precomputed values, enforcing the `p̄(0) = 1` and `p̄(3) = 8` anchors.
    pub fn from_values(values: Vec<BigUint>, provenance: Provenance) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Format {
                line: 0,
                reason: "table has no values".into(),
            });
        }
        for (index, expected) in [(0u64, 1u64), (3, 8)] {
            if let Some(v) = values.get(index as usize) {
                if *v != BigUint::from(expected) {
                    return Err(Error::Anchor { index, expected });
                }
            }
        }
        Ok(Self { values, provenance })
    }

    pub fn n_max(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn get(&self, n: u64) -> Option<&BigUint> {
        self.values.get(usize::try_from(n).ok()?)
    }

    /// `p̄(n)`, or [`Error::TableTooShort`].
    pub fn value(&self, n: u64) -> Result<&BigUint> {
        self.get(n).ok_or(Error::TableTooShort {
            n_max: self.n_max(),
            needed: n,
        })
    }

    pub fn ensure_covers(&self, n: u64) -> Result<()> {
        self.value(n).map(|_| ())
    }

    /// Sum of the decimal digits of every entry, reduced mod `2^61 - 1`.
    pub fn checksum(&self) -> u64 {
        checksum_of(&self.values)
    }
}

pub(crate) fn checksum_of(values: &[BigUint]) -> u64 {
    values.iter().fold(0u64, |acc, v| {
        let digits: u64 = v.to_radix_le(10).iter().map(|&d| u64::from(d)).sum();
        (acc + digits % CHECKSUM_MODULUS) % CHECKSUM_MODULUS
    })
}

/// Counts overpartitions of `n` by walking every one of them.
///
/// Parts are chosen in nonincreasing order; the first time a part size
/// appears the walk branches on whether that occurrence is overlined.
pub fn enumerate_overpartitions(n: u64) -> Result<u64> {
    if n > ENUMERATION_CAP {
        return Err(Error::OracleCap {
            n,
            cap: ENUMERATION_CAP,
        });
    }

    // `last` is the previous part (0 at the start); a part equal to `last`
    // repeats a size, a smaller part opens a new size.
    fn walk(remaining: u64, last: u64) -> u64 {
        if remaining == 0 {
            return 1;
        }
        let largest = if last == 0 { remaining } else { last.min(remaining) };
        let mut count = 0;
        for part in (1..=largest).rev() {
            let rest = walk(remaining - part, part);
            if part == last {
                count += rest;
            } else {
                // first occurrence: plain or overlined
                count += 2 * rest;
            }
        }
        count
    }

    Ok(walk(n, 0))
}

/// Coefficients of `∏_{k=1}^{n_max} (1 + q^k)/(1 - q^k)` through degree `n_max`.
pub fn series_table(n_max: u64) -> OverpartitionTable {
    let len = n_max as usize + 1;
    let mut coeffs = vec![BigUint::zero(); len];
    coeffs[0] = BigUint::one();

    for k in 1..len {
        // multiply by (1 + q^k): descending so each source is read before it is updated
        for j in (k..len).rev() {
            let (low, high) = coeffs.split_at_mut(j);
            high[0] += &low[j - k];
        }
        // divide by (1 - q^k): ascending, i.e. multiply by 1 + q^k + q^2k + ...
        for j in k..len {
            let (low, high) = coeffs.split_at_mut(j);
            high[0] += &low[j - k];
        }
    }

    OverpartitionTable {
        values: coeffs,
        provenance: Provenance::Series,
    }
}

/// `p̄(0..=n_max)` from the square-index recurrence, `O(n_max^{3/2})` additions.
pub fn sparse_table(n_max: u64) -> OverpartitionTable {
    let len = n_max as usize + 1;
    let mut values: Vec<BigUint> = Vec::with_capacity(len);
    values.push(BigUint::one());

    for n in 1..len {
        let mut plus = BigUint::zero();
        let mut minus = BigUint::zero();
        let mut j = 1usize;
        while j * j <= n {
            let term = &values[n - j * j];
            if j % 2 == 1 {
                plus += term;
            } else {
                minus += term;
            }
            j += 1;
        }
        // the alternating sum is positive for every n >= 1
        values.push((plus - minus) << 1u32);
    }

    OverpartitionTable {
        values,
        provenance: Provenance::Sparse,
    }
}

/// Builds both tables and returns the sparse one only if they agree entrywise.
pub fn verified_table(n_max: u64) -> Result<OverpartitionTable> {
    let series = series_table(n_max);
    let sparse = sparse_table(n_max);
    if let Some(n) = first_disagreement(&series, &sparse) {
        return Err(Error::TableMismatch { n });
    }
    Ok(OverpartitionTable {
        values: sparse.values,
        provenance: Provenance::Merged,
    })
}

/// First index where two tables differ, including a length mismatch.
pub fn first_disagreement(a: &OverpartitionTable, b: &OverpartitionTable) -> Option<u64> {
    let common = a.values.len().min(b.values.len());
    (0..common)
        .find(|&i| a.values[i] != b.values[i])
        .or((a.values.len() != b.values.len()).then_some(common))
        .map(|i| i as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_small_values() {
        assert_eq!(enumerate_overpartitions(0).unwrap(), 1);
        assert_eq!(enumerate_overpartitions(2).unwrap(), 4);
        assert_eq!(enumerate_overpartitions(3).unwrap(), 8);
        assert_eq!(
            enumerate_overpartitions(41),
            Err(Error::OracleCap { n: 41, cap: 40 })
        );
    }

    #[test]
    fn series_small_tables() {
        let t = series_table(3);
        let expected: Vec<BigUint> = [1u32, 2, 4, 8].iter().map(|&v| v.into()).collect();
        assert_eq!(t.values(), expected.as_slice());
        assert_eq!(series_table(0).values(), &[BigUint::one()]);
        assert_eq!(
            series_table(9).values()[9],
            BigUint::from(enumerate_overpartitions(9).unwrap())
        );
        assert_eq!(series_table(9).values()[9], BigUint::from(154u32));
    }

    #[test]
    fn sparse_small_tables() {
        assert_eq!(sparse_table(1).values(), &[1u32.into(), 2u32.into()]);
        assert_eq!(sparse_table(3).values(), series_table(3).values());
    }

    #[test]
    fn three_routes_agree_to_forty() {
        let series = series_table(40);
        let sparse = sparse_table(40);
        for n in 0..=40u64 {
            let oracle = BigUint::from(enumerate_overpartitions(n).unwrap());
            assert_eq!(series.values()[n as usize], oracle, "series at {n}");
            assert_eq!(sparse.values()[n as usize], oracle, "sparse at {n}");
        }
    }

    #[test]
    fn anchors_are_enforced() {
        let mut v = series_table(5).values().to_vec();
        v[3] = BigUint::from(9u32);
        assert_eq!(
            OverpartitionTable::from_values(v, Provenance::Series),
            Err(Error::Anchor {
                index: 3,
                expected: 8
            })
        );
        let short = vec![BigUint::one(), BigUint::from(2u32)];
        assert!(OverpartitionTable::from_values(short, Provenance::Series).is_ok());
    }

    #[test]
    fn value_lookup_reports_shortfall() {
        let t = sparse_table(10);
        assert_eq!(
            t.value(11),
            Err(Error::TableTooShort {
                n_max: 10,
                needed: 11
            })
        );
    }

    #[test]
    fn checksum_is_digit_sum() {
        // 1 + 2 + 4 + 8 + (1 + 4) = 20
        assert_eq!(series_table(4).checksum(), 20);
    }

    #[test]
    fn disagreement_detection() {
        let a = series_table(6);
        let b = sparse_table(7);
        assert_eq!(first_disagreement(&a, &b), Some(7));
        assert_eq!(first_disagreement(&a, &sparse_table(6)), None);
    }
}
