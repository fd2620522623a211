//! Additive representations n = a + p: counting how often members of a
//! sparse set land a prime's distance below n, and what that forces about
//! the density of representable integers.
//!
//! f_A(n) = #{a ∈ A : n − a prime}. The first and second moments of f over
//! [1, x] give a Cauchy–Schwarz floor (Σf)²/Σf² on how many n are
//! representable at all; the profile reports both sides of that inequality.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::census::{self, CensusResult, Span, WindowEnd};
use crate::forms;
use crate::report::Quantity;
use crate::sieve::{self, PrimeTable};
use crate::{parallel, Error, Result};

/// Fixed block width for the moment sweep, so the parallel decomposition —
/// and therefore every merged statistic — is independent of thread count.
const PROFILE_CHUNK: u64 = 1 << 16;

/// a, a², a³, … up to `cap`. The base must be at least 2.
pub fn powers(base: u64, cap: u64) -> Result<Vec<u64>> {
    if base < 2 {
        return Err(Error::domain(format!("powers needs base >= 2, got {base}")));
    }
    let mut out = Vec::new();
    let mut v = base;
    while v <= cap {
        out.push(v);
        match v.checked_mul(base) {
            Some(next) => v = next,
            None => break,
        }
    }
    require_nonempty(out, base, cap)
}

/// b^2, b^4, b^16, b^256, … (squaring the previous member) up to `cap`.
pub fn doubly_exponential(base: u64, cap: u64) -> Result<Vec<u64>> {
    if base < 2 {
        return Err(Error::domain(format!(
            "doubly_exponential needs base >= 2, got {base}"
        )));
    }
    let mut out = Vec::new();
    let mut v = base * base;
    while v <= cap {
        out.push(v);
        match v.checked_mul(v) {
            Some(next) => v = next,
            None => break,
        }
    }
    require_nonempty(out, base, cap)
}

fn require_nonempty(out: Vec<u64>, base: u64, cap: u64) -> Result<Vec<u64>> {
    if out.is_empty() {
        return Err(Error::domain(format!(
            "no members: base {base} already exceeds cap {cap}"
        )));
    }
    Ok(out)
}

/// An explicit member list. Zeroes are rejected (members are positive);
/// duplicates are an error unless `dedup` is set, in which case the count
/// of dropped repeats is returned alongside.
pub fn from_values(mut values: Vec<u64>, dedup: bool) -> Result<(Vec<u64>, usize)> {
    if values.contains(&0) {
        return Err(Error::domain("set members must be positive"));
    }
    values.sort_unstable();
    let before = values.len();
    values.dedup();
    let dropped = before - values.len();
    if dropped > 0 && !dedup {
        return Err(Error::domain(format!(
            "{dropped} duplicate member(s); pass dedup to drop them"
        )));
    }
    if values.is_empty() {
        return Err(Error::domain("set must be nonempty"));
    }
    Ok((values, dropped))
}

/// f_A(n) for a single n.
pub fn representation_count(members: &[u64], n: u64) -> Result<u64> {
    if n < 3 {
        return Ok(0); // n − a < 2 for every positive a
    }
    let table = sieve::sieve_window(0, n + 1)?;
    Ok(count_hits(members, n, &table))
}

fn count_hits(members: &[u64], n: u64, table: &PrimeTable) -> u64 {
    let mut hits = 0;
    for &a in members {
        if a + 2 > n {
            break; // members ascend; the rest only overshoot further
        }
        if table.contains(n - a) {
            hits += 1;
        }
    }
    hits
}

/// Moments of f over [1, x] and the representation floor they imply.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepresentationProfile {
    pub x: u64,
    /// Σ_{n ≤ x} f(n) — equivalently #{(a, p) : a + p ≤ x}.
    pub sum_f: u64,
    /// Σ_{n ≤ x} f(n)².
    pub sum_f2: u64,
    /// #{n ≤ x : f(n) > 0}.
    pub represented: u64,
    /// (Σf)²/Σf², the Cauchy–Schwarz lower bound on `represented`.
    pub cs_bound: Quantity,
    /// Number of n ≤ x at each value of f.
    pub histogram: BTreeMap<u64, u64>,
    pub set_size: usize,
}

/// Sweep f over [1, x] in fixed-width blocks (parallel by default).
pub fn profile(members: &[u64], x: u64) -> Result<RepresentationProfile> {
    profile_impl(members, x, true)
}

/// Sequential variant of [`profile`].
pub fn profile_seq(members: &[u64], x: u64) -> Result<RepresentationProfile> {
    profile_impl(members, x, false)
}

fn profile_impl(members: &[u64], x: u64, par: bool) -> Result<RepresentationProfile> {
    let members = checked_members(members)?;
    if x == 0 {
        return Err(Error::domain("profile needs x >= 1"));
    }
    let table = sieve::sieve_window(0, x + 1)?;
    let starts: Vec<u64> = (1..=x).step_by(PROFILE_CHUNK as usize).collect();
    let blocks = parallel::map_collect(par, starts, |lo| {
        let hi = (lo + PROFILE_CHUNK).min(x + 1);
        let mut sum_f = 0u64;
        let mut sum_f2 = 0u64;
        let mut represented = 0u64;
        let mut histogram = BTreeMap::new();
        for n in lo..hi {
            let f = count_hits(&members, n, &table);
            sum_f += f;
            sum_f2 += f * f;
            if f > 0 {
                represented += 1;
            }
            *histogram.entry(f).or_insert(0u64) += 1;
        }
        (sum_f, sum_f2, represented, histogram)
    });
    let mut sum_f = 0u64;
    let mut sum_f2 = 0u64;
    let mut represented = 0u64;
    let mut histogram = BTreeMap::new();
    for (s, s2, r, h) in blocks {
        sum_f += s;
        sum_f2 += s2;
        represented += r;
        for (f, c) in h {
            *histogram.entry(f).or_insert(0u64) += c;
        }
    }
    let cs_bound = if sum_f2 == 0 {
        Quantity::from_integer(0)
    } else {
        Quantity::from_ratio((sum_f as i128) * (sum_f as i128), sum_f2 as i128)
    };
    Ok(RepresentationProfile {
        x,
        set_size: members.len(),
        sum_f,
        sum_f2,
        represented,
        cs_bound,
        histogram,
    })
}

fn checked_members(members: &[u64]) -> Result<Vec<u64>> {
    if members.is_empty() {
        return Err(Error::domain("set must be nonempty"));
    }
    if members.contains(&0) {
        return Err(Error::domain("set members must be positive"));
    }
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::domain("set members must be distinct"));
    }
    Ok(sorted)
}

/// The peak of f seen up to each checkpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProbeEntry {
    pub x: u64,
    pub max_f: u64,
    /// Smallest n attaining the maximum.
    pub attained_at: u64,
}

/// Running maxima of f at increasing checkpoints. Each gap between
/// consecutive checkpoints is one parallel work unit; the prefix maxima are
/// folded in checkpoint order afterwards, so results never depend on
/// scheduling.
pub fn erdos_probe(members: &[u64], checkpoints: &[u64]) -> Result<Vec<ProbeEntry>> {
    let members = checked_members(members)?;
    if checkpoints.is_empty() {
        return Err(Error::domain("probe needs at least one checkpoint"));
    }
    if checkpoints[0] == 0 || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain(
            "checkpoints must be strictly increasing and positive",
        ));
    }
    let last = *checkpoints.last().expect("nonempty");
    let table = sieve::sieve_window(0, last + 1)?;
    let mut segments = Vec::with_capacity(checkpoints.len());
    let mut lo = 1u64;
    for &c in checkpoints {
        segments.push((lo, c + 1));
        lo = c + 1;
    }
    let segment_peaks = parallel::map_collect(true, segments, |(lo, hi)| {
        let mut best = (0u64, lo); // (max_f, smallest n attaining it)
        for n in lo..hi {
            let f = count_hits(&members, n, &table);
            if f > best.0 {
                best = (f, n);
            }
        }
        best
    });
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut running = (0u64, 1u64);
    for (&x, &(max_f, at)) in checkpoints.iter().zip(&segment_peaks) {
        if max_f > running.0 {
            running = (max_f, at);
        }
        out.push(ProbeEntry {
            x,
            max_f: running.0,
            attained_at: running.1,
        });
    }
    Ok(out)
}

/// End-to-end tuple experiment seeded by the set's largest members.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Corollary1Report {
    pub k: usize,
    pub x: u64,
    pub m: u32,
    /// The k largest members of A ∩ [1, x], ascending.
    pub members: Vec<u64>,
    pub raw_tuple: String,
    /// Amount added to n so every shifted form is positive at n ≥ 1.
    pub shift: i64,
    pub shifted_tuple: String,
    pub census: CensusResult,
}

/// Take the k largest members of A ∩ [1, x], turn them into the subtractive
/// tuple {n − a}, shift it into positive coordinates, and census the shifted
/// tuple over [x, 3x) at threshold m.
pub fn corollary1_experiment(
    members: &[u64],
    k: usize,
    x: u64,
    m: u32,
) -> Result<Corollary1Report> {
    let members = checked_members(members)?;
    if k == 0 {
        return Err(Error::domain("corollary1_experiment needs k >= 1"));
    }
    let within: Vec<u64> = members.iter().copied().filter(|&a| a <= x).collect();
    if within.len() < k {
        return Err(Error::domain(format!(
            "set has only {} member(s) <= {x}, need {k}",
            within.len()
        )));
    }
    let chosen: Vec<u64> = within[within.len() - k..].to_vec();
    let raw = census::corollary1_tuple(&chosen)?;
    let (shifted, shift) = forms::shift_to_positive(&raw)?;
    let census = census::tuple_census(&shifted, x, Span::Triple, m, WindowEnd::Exclusive)?;
    Ok(Corollary1Report {
        k,
        x,
        m,
        members: chosen,
        raw_tuple: raw.to_string(),
        shift,
        shifted_tuple: shifted.to_string(),
        census,
    })
}
