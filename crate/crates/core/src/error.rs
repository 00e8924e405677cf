//! Error type shared by all modules.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A basis needs at least two generators.
    #[error("basis needs at least two generators, got {count}")]
    TooFewElements { count: usize },

    /// Generators must be strictly positive.
    #[error("generator at index {index} is {value}; generators must be positive")]
    NonPositiveEntry { index: usize, value: i128 },

    /// The generators must be globally coprime.
    #[error("generators {a:?} have gcd {gcd}; expected gcd 1")]
    NotCoprime { a: Vec<u64>, gcd: u64 },

    /// `t` is too small to decompose as `s*p + sum a_i b_i` with `s >= 0`.
    #[error("t = {t} is below the decomposition range (forced s = {s})")]
    BelowRange { t: u64, s: i128 },

    /// A table would exceed the configured cell cap.
    #[error("{cells} table cells exceed the configured cap of {cap}")]
    ResourceLimit { cells: u64, cap: u64 },

    /// Polynomial division left a remainder.
    #[error("polynomial division leaves a remainder at degree {degree}")]
    NotDivisible { degree: u64 },

    /// An internal consistency check failed; this signals a bug, not bad input.
    #[error("validation failed: {detail}")]
    ValidationFailure { detail: String },

    /// The requested quantity is undefined for this input.
    #[error("not applicable: {what}")]
    NotApplicable { what: &'static str },

    /// The closed forms are not certified below the detected threshold.
    #[error("s = {s} is below the certified threshold s* = {s_star}")]
    BelowThreshold { s: u64, s_star: u64 },

    /// An oracle-vs-formula cross check failed; this signals a bug.
    #[error("verification failed: {detail}")]
    VerificationFailure { detail: String },

    /// A difference constituent lost its positive leading term; impossible
    /// for valid input, surfaced loudly instead of mis-certifying.
    #[error("difference constituent for residue {residue} has a non-positive leading coefficient")]
    DegenerateLeading { residue: u64 },

    /// The entries of an extremal-family `d` vector must be pairwise coprime.
    #[error("entries {d:?} are not pairwise coprime")]
    NotPairwiseCoprime { d: Vec<u64> },
}
