use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("enumeration oracle is capped at n = {cap}, got n = {n}")]
    OracleCap { n: u64, cap: u64 },
    #[error("table covers n <= {n_max}, but n = {needed} is required")]
    TableTooShort { n_max: u64, needed: u64 },
    #[error("series and sparse tables disagree at n = {n}")]
    TableMismatch { n: u64 },
    #[error("table format error at line {line}: {reason}")]
    Format { line: usize, reason: String },
    #[error("table checksum mismatch: file says {stored}, values give {computed}")]
    Checksum { stored: u64, computed: u64 },
    #[error("anchor violation: p̄({index}) must be {expected}")]
    Anchor { index: u64, expected: u64 },

    #[error("invalid precision: {0}")]
    Precision(String),
    #[error("{function} is undefined for the given argument")]
    Domain { function: &'static str },
    #[error("arithmetic failure in {0}")]
    Arithmetic(&'static str),
    #[error("precision audit failed for {expression}: evaluations at {low} and {high} digits disagree")]
    Unstable {
        expression: String,
        low: u32,
        high: u32,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("term for k = {k}, n = {n} has a non-vanishing imaginary part")]
    NonReal { n: u64, k: u64 },
    #[error("range [{from}, {to}] is outside the claimed range of {check} (starts at {threshold}); pass the exploratory flag to run it anyway")]
    BelowThreshold {
        check: &'static str,
        from: u64,
        to: u64,
        threshold: u64,
    },
    #[error("empty range: from = {from} > to = {to}")]
    EmptyRange { from: u64, to: u64 },
}
