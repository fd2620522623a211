//! Windowed, segmented sieve of Eratosthenes and streaming prime counts.
//!
//! A [`PrimeTable`] answers membership for a half-open window [lo, hi);
//! the counting functions stream fixed-size segments instead so x can grow
//! past what fits in memory. Segments are sieved independently (in parallel
//! under the default feature) and merged by exact integer addition, so the
//! answer never depends on the thread count.

use crate::parallel;
use crate::{Error, Result};

/// Numbers per sieve segment. A multiple of 64 so concurrent segments own
/// disjoint words of the bit vector.
pub const SEGMENT_SPAN: u64 = 1 << 20;

/// Hard cap on materialized window width; wider requests should stream via
/// the counting functions instead of building a table.
const MAX_WINDOW: u64 = 1 << 33;

/// Primality bitmap over a half-open window [lo, hi). Bit i of word i/64
/// answers for the integer lo + i.
pub struct PrimeTable {
    lo: u64,
    hi: u64,
    words: Vec<u64>,
}

impl PrimeTable {
    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    /// Membership for lo <= n < hi; asking outside the window is a caller
    /// bug, not a "not prime" answer.
    pub fn contains(&self, n: u64) -> bool {
        assert!(
            n >= self.lo && n < self.hi,
            "PrimeTable::contains({n}) outside window [{}, {})",
            self.lo,
            self.hi
        );
        let i = (n - self.lo) as usize;
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Number of primes in the window.
    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Primes in the window, ascending.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(move |(wi, &w)| {
            let lo = self.lo;
            BitIter { word: w }.map(move |b| lo + (wi * 64) as u64 + b as u64)
        })
    }
}

struct BitIter {
    word: u64,
}

impl Iterator for BitIter {
    type Item = u32;
    fn next(&mut self) -> Option<u32> {
        if self.word == 0 {
            return None;
        }
        let b = self.word.trailing_zeros();
        self.word &= self.word - 1;
        Some(b)
    }
}

/// Sieve the window [lo, hi), parallel over segments by default.
pub fn sieve_window(lo: u64, hi: u64) -> Result<PrimeTable> {
    sieve_impl(lo, hi, true)
}

/// Sequential construction of the same table — the fallback body, kept
/// public so tests and benches can compare routes.
pub fn sieve_window_seq(lo: u64, hi: u64) -> Result<PrimeTable> {
    sieve_impl(lo, hi, false)
}

fn sieve_impl(lo: u64, hi: u64, par: bool) -> Result<PrimeTable> {
    if lo >= hi {
        return Err(Error::domain(format!(
            "sieve window [{lo}, {hi}) is empty or inverted"
        )));
    }
    if hi - lo > MAX_WINDOW {
        return Err(Error::domain(format!(
            "window of {} numbers exceeds the in-memory budget; stream with prime_count instead",
            hi - lo
        )));
    }
    let len = (hi - lo) as usize;
    let mut words = vec![0u64; len.div_ceil(64)];
    let base = base_primes(isqrt(hi - 1));
    // SEGMENT_SPAN is a multiple of 64, so each chunk of words corresponds
    // to exactly one segment of numbers and chunks never share a word.
    let words_per_seg = (SEGMENT_SPAN / 64) as usize;
    parallel::chunks_mut(par, &mut words, words_per_seg, |i, chunk| {
        let seg_lo = lo + i as u64 * SEGMENT_SPAN;
        let seg_hi = (seg_lo + SEGMENT_SPAN).min(hi);
        mark_segment(seg_lo, seg_hi, &base, chunk);
    });
    Ok(PrimeTable { lo, hi, words })
}

/// Sieve one segment [seg_lo, seg_hi) into `words` (bit i = seg_lo + i).
fn mark_segment(seg_lo: u64, seg_hi: u64, base: &[u64], words: &mut [u64]) {
    let len = (seg_hi - seg_lo) as usize;
    for (i, w) in words.iter_mut().enumerate() {
        let bits_left = len.saturating_sub(i * 64);
        *w = match bits_left {
            0 => 0,
            1..=63 => (1u64 << bits_left) - 1,
            _ => !0u64,
        };
    }
    let clear = |words: &mut [u64], i: usize| words[i / 64] &= !(1u64 << (i % 64));
    for n in seg_lo..seg_hi.min(2) {
        clear(words, (n - seg_lo) as usize);
    }
    for &p in base {
        let pp = p as u128 * p as u128;
        if pp >= seg_hi as u128 {
            break;
        }
        let first = pp.max(((seg_lo as u128).div_ceil(p as u128)) * p as u128);
        let mut m = first as u64;
        while m < seg_hi {
            clear(words, (m - seg_lo) as usize);
            m += p;
        }
    }
}

/// Simple full-array sieve for the base primes up to `limit` (inclusive).
fn base_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut is_p = vec![true; limit + 1];
    is_p[0] = false;
    is_p[1] = false;
    let mut p = 2usize;
    while p * p <= limit {
        if is_p[p] {
            let mut m = p * p;
            while m <= limit {
                is_p[m] = false;
                m += p;
            }
        }
        p += 1;
    }
    is_p.iter()
        .enumerate()
        .filter_map(|(n, &b)| b.then_some(n as u64))
        .collect()
}

fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|rr| rr > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|rr| rr <= n) {
        r += 1;
    }
    r
}

fn floor_arg(x: f64, what: &str) -> Result<u64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::domain(format!(
            "{what} needs finite x >= 0, got {x}"
        )));
    }
    if x >= u64::MAX as f64 {
        return Err(Error::UnsupportedRange(format!(
            "{what}: x = {x} exceeds 2^64"
        )));
    }
    Ok(x.floor() as u64)
}

/// π(x): primes p <= x, streamed over segments so x is not memory-bound.
pub fn prime_count(x: f64) -> Result<u64> {
    let limit = floor_arg(x, "prime_count")?;
    Ok(stream_reduce(limit, true, |seg| seg.count()))
}

/// π(x; q, a): primes p <= x with p ≡ a (mod q). `a` may be any integer;
/// it is reduced mod q. q = 0 is a domain error.
pub fn prime_count_ap(x: f64, q: u64, a: i64) -> Result<u64> {
    let limit = floor_arg(x, "prime_count_ap")?;
    if q == 0 {
        return Err(Error::domain("prime_count_ap needs modulus q >= 1"));
    }
    let a = (a.rem_euclid(q as i64)) as u64;
    Ok(stream_reduce(limit, true, move |seg| {
        seg.iter().filter(|&p| p % q == a).count() as u64
    }))
}

/// Split [0, limit] into segments, sieve each, map to a count, add up.
fn stream_reduce<F>(limit: u64, par: bool, per_segment: F) -> u64
where
    F: Fn(&PrimeTable) -> u64 + Sync + Send,
{
    if limit < 2 {
        return 0;
    }
    let base = base_primes(isqrt(limit));
    let seg_starts: Vec<u64> = (0..=limit / SEGMENT_SPAN)
        .map(|i| i * SEGMENT_SPAN)
        .collect();
    let counts = parallel::map_collect(par, seg_starts, |seg_lo| {
        let seg_hi = (seg_lo + SEGMENT_SPAN).min(limit + 1);
        let len = (seg_hi - seg_lo) as usize;
        let mut words = vec![0u64; len.div_ceil(64)];
        mark_segment(seg_lo, seg_hi, &base, &mut words);
        per_segment(&PrimeTable {
            lo: seg_lo,
            hi: seg_hi,
            words,
        })
    });
    counts.into_iter().sum()
}

/// Primes p in the table's window with p ≡ a (mod q), ascending.
pub fn primes_in_class(table: &PrimeTable, q: u64, a: i64) -> Result<Vec<u64>> {
    if q == 0 {
        return Err(Error::domain("primes_in_class needs modulus q >= 1"));
    }
    let a = (a.rem_euclid(q as i64)) as u64;
    Ok(table.iter().filter(|&p| p % q == a).collect())
}

/// Visit every prime <= limit in ascending order, sequentially. Used where
/// the consumer folds in a fixed order (products, ordered scans).
pub(crate) fn for_each_prime(limit: u64, mut f: impl FnMut(u64)) {
    if limit < 2 {
        return;
    }
    let base = base_primes(isqrt(limit));
    let mut seg_lo = 0u64;
    while seg_lo <= limit {
        let seg_hi = (seg_lo + SEGMENT_SPAN).min(limit + 1);
        let len = (seg_hi - seg_lo) as usize;
        let mut words = vec![0u64; len.div_ceil(64)];
        mark_segment(seg_lo, seg_hi, &base, &mut words);
        let seg = PrimeTable {
            lo: seg_lo,
            hi: seg_hi,
            words,
        };
        for p in seg.iter() {
            f(p);
        }
        seg_lo = seg_hi;
    }
}
