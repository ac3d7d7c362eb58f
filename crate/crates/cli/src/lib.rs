//! IO companion for the null-sequence laboratory: versioned JSON artifact
//! schemas, plot emission, and deterministic generators for randomized
//! certification runs. The `nullseq` binary in this crate fronts the core
//! algorithms.

pub mod plot;
pub mod schema;
pub mod testdata;

/// Exit codes used by the `nullseq` binary.
pub mod exit_code {
    /// Success.
    pub const OK: i32 = 0;
    /// A certificate or invariant failed verification.
    pub const INVARIANT_FAIL: i32 = 1;
    /// A search budget was exhausted.
    pub const BUDGET: i32 = 2;
    /// IO or parse failure.
    pub const IO_PARSE: i32 = 3;
    /// The trace is too shallow for the requested tolerance.
    pub const INSUFFICIENT_DEPTH: i32 = 4;
}

/// Environment variable consulted for the default search budget.
pub const BUDGET_ENV: &str = "NULLSEQ_BUDGET_DEFAULT";
