//! Reference oracles for pinning expected values.
//!
//! Everything in this module is deliberately naive and shares no code with
//! the library under test: full-array sieving, per-candidate trial division,
//! fixed-step Simpson quadrature after a change of variables, residue scans
//! straight from definitions, and direct summation with big rationals.
//! Slow is fine; independent is the point.

#![allow(dead_code)]

use num::{BigRational, Signed};
use std::collections::BTreeMap;

/// Full-array Eratosthenes. `out[n]` == n is prime, for n <= limit.
pub fn naive_sieve(limit: usize) -> Vec<bool> {
    let mut is_p = vec![true; limit + 1];
    is_p[0] = false;
    if limit >= 1 {
        is_p[1] = false;
    }
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
    is_p
}

pub fn naive_pi(limit: u64) -> u64 {
    naive_sieve(limit as usize).iter().filter(|&&b| b).count() as u64
}

/// Trial division, the slowest correct primality test there is.
pub fn trial_prime(n: i128) -> bool {
    if n < 2 {
        return false;
    }
    let mut d: i128 = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Euler phi by counting coprime residues, straight from the definition.
pub fn naive_phi(n: u64) -> u64 {
    (1..=n).filter(|&m| naive_gcd(m, n) == 1).count() as u64
}

pub fn naive_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        naive_gcd(b, a % b)
    }
}

/// Logarithmic integral by composite Simpson on the substituted integrand
/// e^u / u over [ln 2, ln x]. Fixed step chosen fine enough that one more
/// halving moves the result by < 1e-12 relative; the assertion keeps the
/// oracle honest.
pub fn li_oracle(x: f64) -> f64 {
    assert!(x >= 2.0);
    if x == 2.0 {
        return 0.0;
    }
    let coarse = li_simpson_subst(x, 1 << 17);
    let fine = li_simpson_subst(x, 1 << 18);
    assert!(
        (coarse - fine).abs() <= 1e-12 * fine.abs().max(1.0),
        "li oracle failed to converge at x={x}"
    );
    fine
}

fn li_simpson_subst(x: f64, panels: usize) -> f64 {
    let a = 2.0f64.ln();
    let b = x.ln();
    let h = (b - a) / panels as f64;
    let f = |u: f64| u.exp() / u;
    let mut acc = f(a) + f(b);
    for i in 1..panels {
        let u = a + h * i as f64;
        acc += if i % 2 == 1 { 4.0 * f(u) } else { 2.0 * f(u) };
    }
    acc * h / 3.0
}

/// #{n mod p : p divides prod_i (a_i n + b_i)} by scanning every residue.
pub fn omega_scan(forms: &[(i64, i64)], p: u64) -> u64 {
    (0..p)
        .filter(|&n| {
            forms.iter().any(|&(a, b)| {
                let v = (a as i128) * (n as i128) + (b as i128);
                v.rem_euclid(p as i128) == 0
            })
        })
        .count() as u64
}

/// Admissibility straight from the definition, scanning every prime p <= 100
/// (and up to k if the tuple is larger). Returns the first failing prime.
pub fn admissibility_witness(forms: &[(i64, i64)]) -> Option<u64> {
    let bound = 100.max(forms.len() as u64);
    for p in 2..=bound {
        if !trial_prime(p as i128) {
            continue;
        }
        if omega_scan(forms, p) == p {
            return Some(p);
        }
    }
    None
}

/// Census by enumeration: for each n in [lo, hi), count distinct form values
/// that are prime (trial division), histogram by hit count.
pub fn census_enum(forms: &[(i64, i64)], lo: i64, hi: i64, m: u32) -> (u64, BTreeMap<u32, u64>) {
    let mut hist: BTreeMap<u32, u64> = BTreeMap::new();
    let mut count = 0u64;
    for n in lo..hi {
        let mut values: Vec<i128> = forms
            .iter()
            .map(|&(a, b)| (a as i128) * (n as i128) + (b as i128))
            .collect();
        values.sort_unstable();
        values.dedup();
        let hits = values.iter().filter(|&&v| trial_prime(v)).count() as u32;
        *hist.entry(hits).or_insert(0) += 1;
        if hits >= m {
            count += 1;
        }
    }
    (count, hist)
}

/// Representation count f_A(n) = #{a in A : n - a prime}, trial division.
pub fn romanoff_f(set: &[u64], n: u64) -> u64 {
    set.iter()
        .filter(|&&a| a < n && trial_prime((n - a) as i128))
        .count() as u64
}

/// Direct-summation reference for the first equidistribution sum:
/// sum over q <= qmax of max_a |#A(x;q,a) - #A(x)/q|, counting classes by
/// iterating the window members.
pub fn hyp1_direct(members: &[u64], x: u64, qmax: u64) -> BigRational {
    let in_window: Vec<u64> = members
        .iter()
        .copied()
        .filter(|&n| n >= x && n < 2 * x)
        .collect();
    let total = BigRational::from_integer((in_window.len() as u64).into());
    let mut sum = BigRational::from_integer(0.into());
    for q in 1..=qmax {
        let mut best = BigRational::from_integer(0.into());
        for a in 0..q {
            let cnt = in_window.iter().filter(|&&n| n % q == a).count() as u64;
            let term = (BigRational::from_integer(cnt.into())
                - &total / BigRational::from_integer(q.into()))
            .abs();
            if term > best {
                best = term;
            }
        }
        sum += best;
    }
    sum
}

pub fn naturals_window(x: u64) -> Vec<u64> {
    (x..2 * x).collect()
}

/// Worst-class statistic for one modulus: (max_a #A(x;q,a), that count as a
/// ratio to #A(x)/q), by iteration.
pub fn hyp3_direct(members: &[u64], x: u64, q: u64) -> (u64, BigRational) {
    let in_window: Vec<u64> = members
        .iter()
        .copied()
        .filter(|&n| n >= x && n < 2 * x)
        .collect();
    let max = (0..q)
        .map(|a| in_window.iter().filter(|&&n| n % q == a).count() as u64)
        .max()
        .unwrap_or(0);
    let ratio = BigRational::new(
        (max as i128 * q as i128).into(),
        (in_window.len() as i128).into(),
    );
    (max, ratio)
}

/// Brute-force sup over u in [2, ucap] of |pi(u;r,b) - li(u)/phi(r)|, fed
/// with precomputed li values (li[u] for u in 0..=ucap; entries below 2
/// unused). Walks every integer u maintaining the running class count and
/// evaluates the discrepancy on BOTH sides of u — pi jumps exactly at the
/// integers, so the one-sided limits at integer points are the only places
/// the sup over the continuum can live (li is increasing between them).
pub fn bv_bruteforce_class(is_prime: &[bool], li: &[f64], r: u64, b: u64, ucap: u64) -> f64 {
    let phi = naive_phi(r) as f64;
    let mut count = 0u64;
    let mut worst = 0.0f64;
    for u in 2..=ucap {
        let before = (count as f64 - li[u as usize] / phi).abs();
        if is_prime[u as usize] && u % r == b % r {
            count += 1;
        }
        let after = (count as f64 - li[u as usize] / phi).abs();
        let d = before.max(after);
        if d > worst {
            worst = d;
        }
    }
    worst
}
