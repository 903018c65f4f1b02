//! Decimal text cache format.
//!
//! ```text
//! OPART-TABLE v1 n_max=<int>
//! <p̄(0)>
//! ...
//! <p̄(n_max)>
//! END <checksum>
//! ```

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use num_bigint::BigUint;

use super::{checksum_of, OverpartitionTable, Provenance};
use crate::error::{Error, Result};

pub const TABLE_MAGIC: &str = "OPART-TABLE v1";

pub fn encode_table(table: &OverpartitionTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{TABLE_MAGIC} n_max={}", table.n_max());
    for v in table.values() {
        let _ = writeln!(out, "{v}");
    }
    let _ = writeln!(out, "END {}", table.checksum());
    out
}

fn format_err(line: usize, reason: impl Into<String>) -> Error {
    Error::Format {
        line,
        reason: reason.into(),
    }
}

pub fn decode_table(text: &str) -> Result<OverpartitionTable> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));

    let (_, header) = lines.next().ok_or_else(|| format_err(1, "empty file"))?;
    let n_max: u64 = header
        .strip_prefix(TABLE_MAGIC)
        .and_then(|rest| rest.strip_prefix(" n_max="))
        .ok_or_else(|| format_err(1, format!("expected `{TABLE_MAGIC} n_max=<int>`")))?
        .parse()
        .map_err(|_| format_err(1, "n_max is not a nonnegative integer"))?;

    let expected = n_max
        .checked_add(1)
        .and_then(|c| usize::try_from(c).ok())
        .ok_or_else(|| format_err(1, "n_max too large"))?;
    let mut values: Vec<BigUint> = Vec::with_capacity(expected.min(1 << 20));
    let mut stored = None;
    let mut last_line = 1;

    for (line_no, line) in lines {
        last_line = line_no;
        if let Some(sum) = line.strip_prefix("END ") {
            stored = Some(
                sum.parse::<u64>()
                    .map_err(|_| format_err(line_no, "checksum is not an integer"))?,
            );
            break;
        }
        if values.len() == expected {
            return Err(format_err(line_no, "more values than n_max announces"));
        }
        if line.is_empty() || !line.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format_err(line_no, "expected a decimal integer"));
        }
        let v = BigUint::parse_bytes(line.as_bytes(), 10)
            .ok_or_else(|| format_err(line_no, "expected a decimal integer"))?;
        values.push(v);
    }

    let stored = stored.ok_or_else(|| {
        format_err(
            last_line,
            format!("truncated table: no END line after {} values", values.len()),
        )
    })?;
    if values.len() != expected {
        return Err(format_err(
            last_line,
            format!(
                "truncated table: expected {expected} values, found {}",
                values.len()
            ),
        ));
    }
    let computed = checksum_of(&values);
    if computed != stored {
        return Err(Error::Checksum { stored, computed });
    }
    OverpartitionTable::from_values(values, Provenance::Cached)
}
