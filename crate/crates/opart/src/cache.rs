//! Reading, writing and (re)building the cached `p̄` table.

use std::fs;
use std::path::Path;

use opart_core::exact::{decode_table, encode_table, series_table, sparse_table, verified_table};
use opart_core::OverpartitionTable;

use crate::error::{CliError, Result};

/// How a fresh table is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Series,
    Sparse,
    /// Both methods, compared entry by entry.
    Both,
}

pub fn build_table(n_max: u64, method: Method) -> Result<OverpartitionTable> {
    Ok(match method {
        Method::Series => series_table(n_max),
        Method::Sparse => sparse_table(n_max),
        Method::Both => verified_table(n_max)?,
    })
}

pub fn save_table(path: &Path, table: &OverpartitionTable) -> Result<()> {
    // write-then-rename so a reader never sees a half-written table
    let tmp = path.with_extension("partial");
    fs::write(&tmp, encode_table(table)).map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

pub fn load_table(path: &Path) -> Result<OverpartitionTable> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(decode_table(&text)?)
}

/// A table covering `n_max`: read from `cache` when it exists and is long
/// enough, otherwise computed by both methods and written back to `cache`.
pub fn table_for(cache: Option<&Path>, n_max: u64) -> Result<OverpartitionTable> {
    if let Some(path) = cache {
        if path.exists() {
            let table = load_table(path)?;
            if table.n_max() >= n_max {
                return Ok(table);
            }
        }
    }
    let table = build_table(n_max, Method::Both)?;
    if let Some(path) = cache {
        save_table(path, &table)?;
    }
    Ok(table)
}
