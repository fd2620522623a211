//! Censuses of simultaneous prime values over integer windows.
//!
//! For a system {L₁, …, L_k} and a window of n, the census counts how many
//! n make at least m of the *distinct* values Lᵢ(n) prime (a value shared
//! by two forms is one hit, not two), and returns the full histogram by hit
//! count. Primality over the window is answered by one sieved table per
//! form — k arithmetic-progression sweeps — never by per-n primality tests.

use crate::forms::{LinearForm, TupleSet};
use crate::sieve::{self, PrimeTable};
use crate::{parallel, Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;

/// Window span: count over [x, 2x) or [x, 3x).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Span {
    Double,
    Triple,
}

impl Span {
    pub fn factor(self) -> u64 {
        match self {
            Span::Double => 2,
            Span::Triple => 3,
        }
    }
}

/// Right-end convention. `Exclusive` is [x, span·x); `Trimmed` drops the
/// final integer, [x, span·x − 1), i.e. n ≤ span·x − 2 — the window the
/// proofs actually walk. Both are exposed so either reading reproduces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WindowEnd {
    #[default]
    Exclusive,
    Trimmed,
}

/// Census outcome: the count of window points meeting the threshold and
/// the exact histogram of hit counts (keys 0..=k; values sum to the window
/// length). `value_collisions` records whether any n produced duplicate
/// form values inside the window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusResult {
    pub x: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub span: Option<u8>,
    pub k: usize,
    pub m: u32,
    pub count: u64,
    pub histogram: BTreeMap<u32, u64>,
    pub window: [i64; 2],
    pub value_collisions: bool,
}

/// Number of distinct prime values among {Lᵢ(n)}. Negative values (and 0, 1)
/// are simply nonprime; values at or past 2^64 are out of certified range.
pub fn count_prime_hits(tuple: &TupleSet, n: i64) -> Result<u32> {
    let mut values: Vec<i128> = tuple
        .forms()
        .iter()
        .map(|f| f.evaluate(n))
        .collect::<Result<Vec<_>>>()?;
    values.sort_unstable();
    values.dedup();
    let mut hits = 0u32;
    for v in values {
        if crate::arith::is_prime_wide(v)? {
            hits += 1;
        }
    }
    Ok(hits)
}

/// Census over [x, span·x) (or the trimmed variant), in parallel chunks by
/// default. x must be at least 2.
pub fn tuple_census(
    tuple: &TupleSet,
    x: u64,
    span: Span,
    m: u32,
    end: WindowEnd,
) -> Result<CensusResult> {
    if x < 2 {
        return Err(Error::domain(format!("tuple_census needs x >= 2, got {x}")));
    }
    let xi = i64::try_from(x)
        .ok()
        .filter(|&v| v <= i64::MAX / 4)
        .ok_or_else(|| Error::UnsupportedRange(format!("census x = {x} too large")))?;
    let mut hi = xi * span.factor() as i64;
    if end == WindowEnd::Trimmed {
        hi -= 1;
    }
    let mut result = census_window(tuple, xi, hi, m)?;
    result.span = Some(span.factor() as u8);
    Ok(result)
}

/// Census over an arbitrary window [lo, hi) of n. The x field of the result
/// is the window start; span is left unset.
pub fn census_window(tuple: &TupleSet, lo: i64, hi: i64, m: u32) -> Result<CensusResult> {
    census_impl(tuple, lo, hi, m, true)
}

/// Sequential variant of [`census_window`] — the fallback body, public for
/// route-comparison tests and benches.
pub fn census_window_seq(tuple: &TupleSet, lo: i64, hi: i64, m: u32) -> Result<CensusResult> {
    census_impl(tuple, lo, hi, m, false)
}

/// Numbers of n handled per work unit; fixed so the chunk decomposition
/// (and thus the merged result) is independent of thread count.
const CENSUS_CHUNK: i64 = 1 << 16;

fn census_impl(tuple: &TupleSet, lo: i64, hi: i64, m: u32, par: bool) -> Result<CensusResult> {
    if lo >= hi {
        return Err(Error::domain(format!(
            "census window [{lo}, {hi}) is empty"
        )));
    }
    // One primality table per form, covering that form's value range over
    // the whole window. Slopes are positive so ranges are [L(lo), L(hi-1)].
    let tables: Vec<Option<PrimeTable>> = tuple
        .forms()
        .iter()
        .map(|f| form_table(f, lo, hi))
        .collect::<Result<Vec<_>>>()?;

    let chunks: Vec<(i64, i64)> = {
        let mut v = Vec::new();
        let mut c = lo;
        while c < hi {
            let ce = (c + CENSUS_CHUNK).min(hi);
            v.push((c, ce));
            c = ce;
        }
        v
    };

    let partials = parallel::map_collect(par, chunks, |(clo, chi)| {
        let mut hist: BTreeMap<u32, u64> = BTreeMap::new();
        let mut collisions = false;
        let mut vals: Vec<(i128, bool)> = Vec::with_capacity(tuple.k());
        for n in clo..chi {
            vals.clear();
            for (f, table) in tuple.forms().iter().zip(&tables) {
                let v = f.evaluate(n).expect("endpoints were checked");
                let prime = v >= 2
                    && table
                        .as_ref()
                        .expect("a table exists whenever some value reaches 2")
                        .contains(v as u64);
                vals.push((v, prime));
            }
            vals.sort_unstable();
            let before = vals.len();
            vals.dedup(); // equal values carry equal prime flags
            if vals.len() < before {
                collisions = true;
            }
            let hits = vals.iter().filter(|&&(_, p)| p).count() as u32;
            *hist.entry(hits).or_insert(0) += 1;
        }
        (hist, collisions)
    });

    let mut histogram: BTreeMap<u32, u64> = BTreeMap::new();
    let mut value_collisions = false;
    for (h, c) in partials {
        for (hits, n) in h {
            *histogram.entry(hits).or_insert(0) += n;
        }
        value_collisions |= c;
    }
    let count = histogram
        .iter()
        .filter(|&(&h, _)| h >= m)
        .map(|(_, &n)| n)
        .sum();
    debug_assert_eq!(
        histogram.values().sum::<u64>(),
        (hi - lo) as u64,
        "histogram must partition the window"
    );
    Ok(CensusResult {
        x: lo,
        span: None,
        k: tuple.k(),
        m,
        count,
        histogram,
        window: [lo, hi],
        value_collisions,
    })
}

/// Sieved table over one form's value range, or None when the form never
/// reaches 2 on the window (every value nonprime).
fn form_table(f: &LinearForm, lo: i64, hi: i64) -> Result<Option<PrimeTable>> {
    let vlo = f.evaluate(lo)?;
    let vhi = f.evaluate(hi - 1)?;
    if vhi < 2 {
        return Ok(None);
    }
    let tlo = vlo.max(2) as u64;
    let thi = u64::try_from(vhi)
        .ok()
        .and_then(|v| v.checked_add(1))
        .ok_or_else(|| Error::UnsupportedRange(format!("value range of {f} reaches past 2^64")))?;
    sieve::sieve_window(tlo, thi).map(Some)
}

/// The window bound x / ((ln x)^k · e^(C·k)).
pub fn theorem_bound(x: u64, k: usize, c: f64) -> Result<f64> {
    if x < 2 {
        return Err(Error::domain(format!(
            "theorem_bound needs x >= 2, got {x}"
        )));
    }
    let lnx = (x as f64).ln();
    Ok(x as f64 / (lnx.powi(k as i32) * (c * k as f64).exp()))
}

/// The matching hit threshold ⌈C⁻¹ ln k⌉. Zero for k = 1; callers wanting
/// a usable census threshold clamp to at least 1.
pub fn suggested_threshold(k: usize, c: f64) -> Result<u32> {
    if k == 0 || c <= 0.0 {
        return Err(Error::domain("suggested_threshold needs k >= 1 and C > 0"));
    }
    Ok(((k as f64).ln() / c).ceil() as u32)
}

/// The system {n − a₁, …, n − a_k} for distinct positive shifts a_j.
pub fn corollary1_tuple(shifts: &[u64]) -> Result<TupleSet> {
    let forms = shifts
        .iter()
        .map(|&a| {
            if a == 0 {
                return Err(Error::domain("corollary1_tuple needs positive members"));
            }
            let b = i64::try_from(a)
                .map_err(|_| Error::UnsupportedRange(format!("member {a} too large")))?;
            LinearForm::new(1, -b)
        })
        .collect::<Result<Vec<_>>>()?;
    TupleSet::new(forms) // duplicate members fail distinctness here
}
