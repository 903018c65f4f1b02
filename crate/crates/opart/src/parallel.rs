//! Splitting a range of centres across worker threads.
//!
//! Each worker gets one contiguous block, so neighbouring centres still share
//! cached `ln p̄` values. Results are concatenated in block order regardless
//! of completion order.

use std::thread;

use opart_core::verify::{assemble_report, check_records, CheckKind, RangeReport};
use opart_core::{OverpartitionTable, PrecisionContext};

use crate::error::{CliError, Result};

pub fn default_jobs() -> usize {
    thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Contiguous blocks covering `[from, to]`, at most `parts` of them.
pub fn blocks(from: u64, to: u64, parts: usize) -> Vec<(u64, u64)> {
    if from > to {
        return Vec::new();
    }
    let len = to - from + 1;
    let parts = (parts.max(1) as u64).min(len);
    let (base, extra) = (len / parts, len % parts);
    let mut out = Vec::with_capacity(parts as usize);
    let mut start = from;
    for i in 0..parts {
        let size = base + u64::from(i < extra);
        out.push((start, start + size - 1));
        start += size;
    }
    out
}

/// Runs `f` on each block of `[from, to]` and concatenates the results in order.
pub fn map_blocks<T, F>(from: u64, to: u64, jobs: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, u64) -> Result<Vec<T>> + Sync,
{
    let parts = blocks(from, to, jobs);
    if parts.len() <= 1 {
        return parts.into_iter().try_fold(Vec::new(), |mut acc, (a, b)| {
            acc.extend(f(a, b)?);
            Ok(acc)
        });
    }
    let f = &f;
    thread::scope(|scope| {
        let handles: Vec<_> = parts
            .iter()
            .map(|&(a, b)| scope.spawn(move || f(a, b)))
            .collect();
        let mut out = Vec::new();
        for h in handles {
            out.extend(h.join().map_err(|_| CliError::Worker)??);
        }
        Ok(out)
    })
}

/// [`opart_core::verify::run_check`] with the centres spread over `jobs` threads.
pub fn run_check(
    kind: &CheckKind,
    from: u64,
    to: u64,
    table: Option<&OverpartitionTable>,
    ctx: &PrecisionContext,
    exploratory: bool,
    jobs: usize,
) -> Result<RangeReport> {
    kind.validate(from, to, exploratory)?;
    let records = map_blocks(from, to, jobs, |a, b| Ok(check_records(kind, a, b, table, ctx)?))?;
    Ok(assemble_report(kind, from, to, records, ctx)?)
}
