//! Exact and certified evaluation of the overpartition function `p̄(n)`, and
//! numerical verification of the second-difference bounds on
//! `log (p̄(n)/n^α)^(1/n)`.
//!
//! The crate is `no_std` (it needs `alloc`). File IO, report rendering and
//! the command-line front end live in the `opart` crate.
//!
//! - [`exact`]: `p̄(0..=n_max)` by enumeration, by the product generating
//!   function, and by the sparse square-index recurrence.
//! - [`numerics`]: working-precision contexts and the two-level precision
//!   audit every reported real passes through.
//! - [`series`]: the Zuckerman series with Engel's truncation bound and the
//!   main-term/remainder decomposition.
//! - [`verify`]: per-`n` inequality checks and range reports.

#![no_std]

extern crate alloc;

pub mod error;
pub mod exact;
pub mod numerics;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{OverpartitionTable, Provenance};
pub use numerics::{Arith, AuditedReal, PrecisionContext};


pub use series::{CertifiedEstimate, Decomposition, OmegaExponent};
pub use verify::{AlphaParam, CheckKind, CheckRecord, RangeReport, Verdict};
