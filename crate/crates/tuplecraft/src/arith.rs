//! Scalar number theory: gcd, Euler's totient, deterministic 64-bit
//! primality, modular helpers, and the logarithmic integral.
//!
//! Form values are evaluated in i128 with checked arithmetic — that covers
//! every magnitude the rest of the crate promises to handle (slopes and
//! windows keep products well under 2^96), and overflow surfaces as an
//! [`Error::Overflow`](crate::Error) instead of wrapping.

use crate::{Error, Result};

/// Greatest common divisor of two integers, always nonnegative.
/// `gcd(0, 0) == 0` by convention.
pub fn gcd(a: i128, b: i128) -> u128 {
    gcd_u128(a.unsigned_abs(), b.unsigned_abs())
}

pub const fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

const fn gcd_u128(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd_u128(b, a % b)
    }
}

/// Euler's totient by trial-division factorization. Fine for the desk-scale
/// arguments the audits produce (moduli, slopes, their products); not meant
/// for adversarial 64-bit semiprimes.
pub fn euler_phi(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::domain("euler_phi(0) is undefined"));
    }
    let mut n = n;
    let mut phi = 1u64;
    let mut d = 2u64;
    while (d as u128) * (d as u128) <= n as u128 {
        if n.is_multiple_of(d) {
            let mut pk = 1u64;
            while n.is_multiple_of(d) {
                n /= d;
                pk *= d;
            }
            phi *= pk - pk / d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        phi *= n - 1;
    }
    Ok(phi)
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo a prime `p` (Fermat). Caller guarantees p prime
/// and a not divisible by p.
pub(crate) fn inv_mod_prime(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Witnesses that make Miller–Rabin deterministic for every n < 2^64
/// (Jim Sinclair's seven-base set).
const MR_WITNESSES: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

/// Deterministic primality for the full u64 range: a strong-probable-prime
/// test against a fixed witness set, never probabilistic.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    if n < 121 {
        return true; // no composite below 11^2 survives the divisions above
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &w in &MR_WITNESSES {
        let a = w % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality for signed wide values: anything below 2 (negatives included)
/// is nonprime by fiat, and values at or above 2^64 are outside the range
/// the deterministic witness set certifies.
pub fn is_prime_wide(v: i128) -> Result<bool> {
    if v < 2 {
        return Ok(false);
    }
    u64::try_from(v)
        .map(is_prime)
        .map_err(|_| Error::UnsupportedRange(format!("{v} >= 2^64, primality not certified")))
}

/// Smallest prime strictly greater than `t` (t is tiny in practice —
/// it comes from a doubly iterated logarithm).
pub fn next_prime_above(t: f64) -> u64 {
    let mut p = if t < 2.0 { 2u64 } else { t.floor() as u64 + 1 };
    while !is_prime(p) || p as f64 <= t {
        p += 1;
    }
    p
}

const LI_REL_TOL: f64 = 1e-12;

/// Logarithmic integral li(x) = ∫₂ˣ dt/ln t, by adaptive Simpson quadrature
/// with interval halving until successive estimates agree to 1e-12 relative.
/// li(2) = 0 exactly; x < 2 (or NaN) is a domain error.
pub fn log_integral(x: f64) -> Result<f64> {
    if x < 2.0 || x.is_nan() {
        return Err(Error::domain(format!("log_integral needs x >= 2, got {x}")));
    }
    if x == 2.0 {
        return Ok(0.0);
    }
    Ok(integrate_recip_ln(2.0, x))
}

/// Adaptive Simpson for ∫ dt/ln t over [a, b], 2 <= a < b.
fn integrate_recip_ln(a: f64, b: f64) -> f64 {
    let f = |t: f64| t.ln().recip();
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    // Relative tolerance against the first estimate, with an absolute floor
    // so short intervals near zero still terminate.
    let eps = (LI_REL_TOL * whole.abs()).max(1e-300);
    adaptive(&f, a, b, fa, fm, fb, whole, eps, 60)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        // Richardson extrapolation of the two half-interval estimates.
        left + right + delta / 15.0
    } else {
        adaptive(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)
            + adaptive(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)
    }
}

/// Cumulative table of li at integer arguments: the discrepancy scans need
/// li at every prime jump point, and building the prefix once is far cheaper
/// than re-integrating [2, u] per query.
///
/// Construction is always sequential — float accumulation order is part of
/// the value, and reports must not depend on the thread count.
pub struct LiTable {
    values: Vec<f64>,
}

impl LiTable {
    pub fn build(ucap: u64) -> Result<LiTable> {
        if ucap < 2 {
            return Err(Error::domain("LiTable needs ucap >= 2"));
        }
        let ucap = usize::try_from(ucap)
            .map_err(|_| Error::domain("LiTable ucap does not fit in memory"))?;
        let mut values = vec![0.0f64; ucap + 1];
        let mut acc = 0.0f64;
        for (u, slot) in values.iter_mut().enumerate().skip(3) {
            acc += integrate_recip_ln((u - 1) as f64, u as f64);
            *slot = acc;
        }
        Ok(LiTable { values })
    }

    /// li(u); u below 2 never occurs in the scans (values there are 0).
    pub fn get(&self, u: u64) -> f64 {
        self.values[u as usize]
    }

    pub fn ucap(&self) -> u64 {
        (self.values.len() - 1) as u64
    }
}
