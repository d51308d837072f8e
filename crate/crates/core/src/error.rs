//! Error types shared across the crate.

use thiserror::Error;

/// Errors from exact arithmetic over Z_m.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    /// The element shares a nontrivial factor with the modulus. Over a
    /// composite modulus n = pq the reported gcd is a factor of n.
    #[error("element is not a unit (gcd with modulus = {gcd})")]
    NonUnit { gcd: u64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },

    /// Matrix inversion failed. When elimination hit a column whose entries
    /// all share a nontrivial gcd with a composite modulus, that gcd is
    /// surfaced as `factor` (it divides the modulus).
    #[error("matrix is not invertible{}", match .factor {
        Some(f) => format!(" (nontrivial factor of modulus: {f})"),
        None => String::new(),
    })]
    NotInvertible { factor: Option<u64> },

    #[error("linear system is inconsistent")]
    Inconsistent,

    /// Gaussian elimination requires a prime modulus.
    #[error("modulus {modulus} is not prime; elimination needs a field")]
    CompositeModulus { modulus: u64 },

    #[error("moduli {p} and {q} are not coprime")]
    ModuliNotCoprime { p: u64, q: u64 },

    #[error("{divisor} does not divide modulus {modulus}")]
    NotADivisor { divisor: u64, modulus: u64 },

    #[error("modulus {value} out of range (need 2 <= m < 2^63)")]
    BadModulus { value: u64 },

    #[error("matrix dimension must be positive, got {dim}")]
    BadDimension { dim: usize },

    #[error("expected {expected} entries, got {got}")]
    BadEntryCount { expected: usize, got: usize },
}

/// Errors from key-exchange setup.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KexError {
    /// All 1x1 matrices commute, so the scheme needs dim >= 2.
    #[error("degenerate dimension {dim}: need dim >= 2")]
    DegenerateDim { dim: usize },

    #[error("modulus {modulus} is not prime")]
    NonPrimeModulus { modulus: u64 },

    #[error("M1*M2 = M2*M1: generators must not commute")]
    CommutingGenerators,

    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Errors from the patented-scheme key lifecycle.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PkeError {
    #[error("bad factors p={p}, q={q}: need distinct primes")]
    BadFactors { p: u64, q: u64 },

    #[error("degenerate dimension {dim}: need k >= 2")]
    DegenerateDim { dim: usize },

    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Errors from the key-recovery attacks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AttackError {
    /// The relinearized system has no solution; an honest transcript always
    /// yields a consistent system, so this signals malformed input.
    #[error("relinearized system is inconsistent (malformed transcript)")]
    Inconsistent,

    #[error("matrix has rank > 1, no outer-product factorization")]
    NotRankOne,

    #[error("zero matrix has no rank-one factorization")]
    ZeroMatrix,

    #[error(
        "retry budget exhausted after {attempts} attempts \
         (nullspace dim {nullspace_dim}; failures: {not_rank_one} not-rank-one, \
         {factor_singular} singular factor, {product_mismatch} product mismatch)"
    )]
    RetriesExhausted {
        attempts: u32,
        nullspace_dim: usize,
        not_rank_one: u32,
        factor_singular: u32,
        product_mismatch: u32,
    },

    #[error("p*q = {p}*{q} does not equal the public modulus {n}")]
    FactorMismatch { p: u64, q: u64, n: u64 },

    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
