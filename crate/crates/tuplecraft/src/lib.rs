//! Prime tuples, sieved windows, and equidistribution audits.
//!
//! The crate is organized around a handful of desk-scale number-theory
//! workloads: segmented sieving ([`sieve`]), admissibility and singular
//! series for systems of linear forms ([`forms`]), window censuses of
//! simultaneous prime values ([`census`]), discrepancy audits of how
//! primes and user-supplied sets spread over residue classes ([`audit`]),
//! and representation profiles n = p + a ([`romanoff`]).
//!
//! Everything countable is counted exactly: residue-class discrepancies
//! are exact rationals, and floating point appears only in the
//! logarithmic-integral quadrature and in rendered report fields.
//!
//! With the default `parallel` feature the heavy inner loops run on
//! rayon; disabling it swaps in sequential fallbacks that produce
//! bit-identical results.

pub mod arith;
pub mod audit;
pub mod census;
pub mod forms;
pub mod report;
pub mod romanoff;
pub mod sieve;

mod parallel;

pub use report::{Quantity, Rational};

/// Errors shared by every module: domain violations, arithmetic overflow,
/// ranges the deterministic primality test cannot certify, and parse
/// failures from the line-oriented input formats.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("unsupported range: {0}")]
    UnsupportedRange(String),
    #[error("invalid tuple: {0}")]
    InvalidTuple(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
