//! Systems of linear forms a·n + b: admissibility, residue root counts,
//! the truncated singular-series product, and the positivity shift.
//!
//! A system is admissible when no prime p covers every residue class, i.e.
//! ω(p) = #{n mod p : p | ∏(aᵢn + bᵢ)} stays below p for all p. With all
//! gcd(aᵢ, bᵢ) = 1 each form contributes at most one root mod p, so only
//! primes p ≤ k can fail and the check is finite.

use crate::arith;
use crate::report::Rational;
use crate::sieve;
use crate::{Error, Result};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use std::collections::BTreeSet;
use std::fmt;

/// One form a·n + b with a ≥ 1. Values are evaluated in i128 with checked
/// arithmetic; i64 coefficients keep every product inside that envelope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    slope: i64,
    intercept: i64,
}

impl LinearForm {
    pub fn new(slope: i64, intercept: i64) -> Result<LinearForm> {
        if slope < 1 {
            return Err(Error::InvalidTuple(format!(
                "form must have positive slope, got {slope}n{intercept:+}"
            )));
        }
        Ok(LinearForm { slope, intercept })
    }

    pub fn slope(&self) -> i64 {
        self.slope
    }

    pub fn intercept(&self) -> i64 {
        self.intercept
    }

    /// a·n + b exactly. i64 inputs cannot overflow the i128 intermediate,
    /// but the checked ops make that a proof obligation of the compiler,
    /// not of this comment.
    pub fn evaluate(&self, n: i64) -> Result<i128> {
        (self.slope as i128)
            .checked_mul(n as i128)
            .and_then(|p| p.checked_add(self.intercept as i128))
            .ok_or_else(|| Error::Overflow(format!("{self} at n = {n}")))
    }

    /// The root of a·n + b ≡ 0 (mod p) when p ∤ a; `None` when p | a (no
    /// root, or every residue if p | b too — callers check that case).
    fn root_mod(&self, p: u64) -> Option<u64> {
        let a = (self.slope as i128).rem_euclid(p as i128) as u64;
        if a == 0 {
            return None;
        }
        let b = (self.intercept as i128).rem_euclid(p as i128) as u64;
        let inv = arith::inv_mod_prime(a, p);
        Some(arith::mul_mod((p - b) % p, inv, p))
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.slope == 1 {
            write!(f, "n")?;
        } else {
            write!(f, "{}n", self.slope)?;
        }
        match self.intercept {
            0 => Ok(()),
            b => write!(f, "{b:+}"),
        }
    }
}

/// A nonempty system of pairwise-distinct forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleSet {
    forms: Vec<LinearForm>,
}

impl TupleSet {
    pub fn new(forms: Vec<LinearForm>) -> Result<TupleSet> {
        if forms.is_empty() {
            return Err(Error::InvalidTuple(
                "a tuple needs at least one form".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        for f in &forms {
            if !seen.insert(*f) {
                return Err(Error::InvalidTuple(format!("duplicate form {f}")));
            }
        }
        Ok(TupleSet { forms })
    }

    /// The offset pattern {n + o₁, …, n + o_k}.
    pub fn from_offsets(offsets: &[i64]) -> Result<TupleSet> {
        let forms = offsets
            .iter()
            .map(|&o| LinearForm::new(1, o))
            .collect::<Result<Vec<_>>>()?;
        TupleSet::new(forms)
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    pub fn k(&self) -> usize {
        self.forms.len()
    }

    /// Enforce gcd(a, |b|) = 1 on every form, naming the first offender.
    /// The subset scan and the hypothesis audits require this; censuses
    /// accept arbitrary tuples.
    pub fn require_coprime(&self) -> Result<()> {
        for f in &self.forms {
            let g = arith::gcd(f.slope as i128, f.intercept as i128);
            if g != 1 {
                return Err(Error::InvalidTuple(format!(
                    "form {f} has gcd({}, {}) = {g}",
                    f.slope,
                    f.intercept.unsigned_abs()
                )));
            }
        }
        Ok(())
    }

    /// Parse the line format: one form per line as two decimal integers
    /// "a b" (b may be negative); '#' starts a comment line.
    pub fn parse(text: &str) -> Result<TupleSet> {
        let mut forms = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let (a, b) = match (it.next(), it.next(), it.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(Error::Parse(format!(
                        "line {}: expected \"a b\", got {line:?}",
                        idx + 1
                    )))
                }
            };
            let a: i64 = a
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad slope {a:?}", idx + 1)))?;
            let b: i64 = b
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad intercept {b:?}", idx + 1)))?;
            forms.push(LinearForm::new(a, b)?);
        }
        TupleSet::new(forms)
    }
}

impl fmt::Display for TupleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, form) in self.forms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{form}")?;
        }
        write!(f, "}}")
    }
}

/// ω(p) = #{n mod p : p divides ∏ forms(n)}, for prime p. Counted through
/// the modular roots — one per form with p ∤ a — rather than a residue scan,
/// so the singular-series product stays O(k) per prime. A form with
/// p | gcd(a, b) vanishes identically mod p and the answer is p itself.
pub fn omega_p(tuple: &TupleSet, p: u64) -> Result<u64> {
    if !arith::is_prime(p) {
        return Err(Error::domain(format!(
            "omega_p needs a prime modulus, got {p}"
        )));
    }
    let mut roots: Vec<u64> = Vec::with_capacity(tuple.k());
    for f in tuple.forms() {
        match f.root_mod(p) {
            Some(r) => roots.push(r),
            None => {
                if (f.intercept as i128).rem_euclid(p as i128) == 0 {
                    return Ok(p); // p | a and p | b: identically zero
                }
            }
        }
    }
    roots.sort_unstable();
    roots.dedup();
    Ok((roots.len() as u64).min(p))
}

/// Admissibility verdict; inadmissible systems carry the failing prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Admissibility {
    Admissible,
    Inadmissible { witness: u64 },
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Admissibility::Admissible)
    }

    pub fn witness(&self) -> Option<u64> {
        match self {
            Admissibility::Admissible => None,
            Admissibility::Inadmissible { witness } => Some(*witness),
        }
    }
}

/// Decide admissibility, reporting the *smallest* witness prime when the
/// answer is no. Witnesses p ≤ k are found by the ascending root-count
/// scan (a form identically zero mod p shows up there too, as ω(p) = p).
/// The only witnesses that can exceed k come from a form whose slope and
/// intercept share a factor — every prime dividing that gcd kills the
/// whole product — so those gcds are the fallback once the scan is clean.
pub fn is_admissible(tuple: &TupleSet) -> Admissibility {
    let k = tuple.k() as u64;
    let mut p = 2u64;
    while p <= k {
        if arith::is_prime(p) {
            let w = omega_p(tuple, p).expect("p is prime");
            if w == p {
                return Admissibility::Inadmissible { witness: p };
            }
        }
        p += 1;
    }
    // No witness up to k, so any prime factor of a slope/intercept gcd is
    // larger than k; the smallest of them is the smallest witness overall.
    let mut witness: Option<u64> = None;
    for f in tuple.forms() {
        let g = arith::gcd(f.slope as i128, f.intercept as i128);
        if g > 1 {
            let p = smallest_prime_factor(g);
            if witness.is_none_or(|w| p < w) {
                witness = Some(p);
            }
        }
    }
    match witness {
        Some(witness) => Admissibility::Inadmissible { witness },
        None => Admissibility::Admissible,
    }
}

fn smallest_prime_factor(g: u128) -> u64 {
    let mut d = 2u128;
    while d * d <= g {
        if g.is_multiple_of(d) {
            return d as u64;
        }
        d += 1;
    }
    g as u64 // g > 1 here
}

/// Scan order for the greedy subset extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanOrder {
    /// Forms in the order given.
    Given,
    /// Forms in a seed-determined shuffle (ChaCha8; same seed, same order,
    /// on every platform).
    Seeded(u64),
}

/// Greedily extract an admissible subsystem: walk the forms in scan order,
/// keeping each form whose addition leaves the kept set admissible.
/// Returns 0-based indices in ascending order; the result is maximal for
/// the scan order (no skipped form could be added back). Requires
/// gcd(aᵢ, bᵢ) = 1 throughout, so the subset is never empty — a lone
/// coprime form has ω(p) ≤ 1 < p everywhere.
pub fn admissible_subset(tuple: &TupleSet, order: ScanOrder) -> Result<Vec<usize>> {
    tuple.require_coprime()?;
    let mut visit: Vec<usize> = (0..tuple.k()).collect();
    if let ScanOrder::Seeded(seed) = order {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        visit.shuffle(&mut rng);
    }
    let mut kept_idx: Vec<usize> = Vec::new();
    let mut kept_forms: Vec<LinearForm> = Vec::new();
    for i in visit {
        kept_forms.push(tuple.forms[i]);
        let candidate = TupleSet {
            forms: kept_forms.clone(),
        };
        if is_admissible(&candidate).is_admissible() {
            kept_idx.push(i);
        } else {
            kept_forms.pop();
        }
    }
    kept_idx.sort_unstable();
    Ok(kept_idx)
}

/// Truncated singular series ∏_{p ≤ cutoff} (1 − ω(p)/p)(1 − 1/p)^(−k).
/// Exactly zero iff some factor vanishes (an inadmissible prime); factors
/// are multiplied in ascending prime order so the value is reproducible.
pub fn singular_series(tuple: &TupleSet, cutoff: u64) -> Result<f64> {
    if cutoff < 2 {
        return Err(Error::domain(format!(
            "singular series cutoff must be >= 2, got {cutoff}"
        )));
    }
    let k = i32::try_from(tuple.k())
        .map_err(|_| Error::domain("tuple too large for singular series exponent"))?;
    let mut product = 1.0f64;
    let mut failed = false;
    sieve::for_each_prime(cutoff, |p| {
        if failed {
            return;
        }
        let w = omega_p(tuple, p).expect("stream yields primes");
        if w == p {
            failed = true;
            return;
        }
        let pf = p as f64;
        product *= (1.0 - w as f64 / pf) * (1.0 - 1.0 / pf).powi(-k);
    });
    Ok(if failed { 0.0 } else { product })
}

/// φ_L(q) = φ(|l₁|·q) / φ(|l₁|) for the form l₁·n + l₂. Returned as an
/// exact rational; the arithmetic always reduces it to an integer (the
/// denominator divides the numerator), but the integrality is an observed
/// property, not part of the contract.
pub fn phi_l(form: &LinearForm, q: u64) -> Result<Rational> {
    if q == 0 {
        return Err(Error::domain("phi_l needs modulus q >= 1"));
    }
    let l1 = form.slope as u64; // slope >= 1 by construction
    let product = l1
        .checked_mul(q)
        .ok_or_else(|| Error::UnsupportedRange(format!("phi_l: |l1|*q overflows ({l1} * {q})")))?;
    let num = arith::euler_phi(product)?;
    let den = arith::euler_phi(l1)?;
    Ok(Rational::new(num.into(), den.into()))
}

/// Rewrite a system with negative intercepts {aᵢn − bᵢ} (bᵢ > 0) as the
/// positive system {aᵢn + lᵢ} obtained by n ↦ n + b* + 1, where b* is the
/// largest bᵢ and lᵢ = aᵢ(b* + 1) − bᵢ > 0. Returns the shifted system and
/// the shift b* + 1. Distinctness and coprimality survive the rewrite.
pub fn shift_to_positive(tuple: &TupleSet) -> Result<(TupleSet, i64)> {
    for f in tuple.forms() {
        if f.intercept >= 0 {
            return Err(Error::domain(format!(
                "shift_to_positive needs every intercept negative; {f} is not"
            )));
        }
    }
    let bstar = tuple
        .forms()
        .iter()
        .map(|f| -f.intercept)
        .max()
        .expect("tuple is nonempty");
    let shift = bstar
        .checked_add(1)
        .ok_or_else(|| Error::Overflow("shift b* + 1".into()))?;
    let shifted = tuple
        .forms()
        .iter()
        .map(|f| {
            let l = f
                .slope
                .checked_mul(shift)
                .and_then(|al| al.checked_add(f.intercept))
                .ok_or_else(|| Error::Overflow(format!("shifted intercept of {f}")))?;
            debug_assert!(l > 0);
            LinearForm::new(f.slope, l)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((TupleSet::new(shifted)?, shift))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn offsets(o: &[i64]) -> TupleSet {
        TupleSet::from_offsets(o).unwrap()
    }

    /// Residue scan straight from the definition, as a cross-check on the
    /// root-counting route.
    fn omega_scan(tuple: &TupleSet, p: u64) -> u64 {
        (0..p)
            .filter(|&n| {
                tuple
                    .forms()
                    .iter()
                    .any(|f| f.evaluate(n as i64).unwrap().rem_euclid(p as i128) == 0)
            })
            .count() as u64
    }

    #[test]
    fn construction_rules() {
        assert!(LinearForm::new(0, 5).is_err());
        assert!(LinearForm::new(-2, 5).is_err());
        assert!(TupleSet::new(vec![]).is_err());
        let f = LinearForm::new(1, 2).unwrap();
        assert!(TupleSet::new(vec![f, f]).is_err());
        assert_eq!(offsets(&[0, 2]).to_string(), "{n, n+2}");
        assert_eq!(
            TupleSet::parse("3 -5\n2 -7").unwrap().to_string(),
            "{3n-5, 2n-7}"
        );
    }

    #[test]
    fn evaluation_is_exact() {
        let f = LinearForm::new(3, -5).unwrap();
        assert_eq!(f.evaluate(0).unwrap(), -5);
        assert_eq!(f.evaluate(1_000_000_007).unwrap(), 3_000_000_016);
        let big = LinearForm::new(i64::MAX, i64::MAX).unwrap();
        // stays inside i128 even at the extremes of the coefficient range
        assert_eq!(
            big.evaluate(i64::MAX).unwrap(),
            (i64::MAX as i128) * (i64::MAX as i128) + i64::MAX as i128
        );
    }

    #[test]
    fn omega_examples() {
        let twin = offsets(&[0, 2]);
        assert_eq!(omega_p(&twin, 2).unwrap(), 1);
        assert_eq!(omega_p(&twin, 3).unwrap(), 2);
        assert!(omega_p(&twin, 4).is_err());
        assert!(omega_p(&twin, 1).is_err());
        // identically-zero form: every residue is a root
        let t = TupleSet::parse("2 4\n1 1").unwrap();
        assert_eq!(omega_p(&t, 2).unwrap(), 2);
    }

    #[test]
    fn omega_root_count_matches_residue_scan() {
        let tuples = [
            offsets(&[0, 2, 6]),
            offsets(&[0, 4, 6, 10, 12, 16]),
            TupleSet::parse("2 1\n3 -1\n5 2").unwrap(),
            TupleSet::parse("6 1\n10 3\n15 2").unwrap(),
            TupleSet::parse("7 0\n7 3\n14 5").unwrap(),
        ];
        for t in &tuples {
            for p in [2u64, 3, 5, 7, 11, 13, 31, 97] {
                assert_eq!(omega_p(t, p).unwrap(), omega_scan(t, p), "{t} at p={p}");
            }
        }
    }

    #[test]
    fn admissibility_fixtures() {
        assert!(is_admissible(&offsets(&[0, 2, 6])).is_admissible());
        assert_eq!(is_admissible(&offsets(&[0, 2, 4])).witness(), Some(3));
        assert_eq!(is_admissible(&offsets(&[0, 1])).witness(), Some(2));
        assert!(is_admissible(&offsets(&[0])).is_admissible());
        // shared factor: witness divides the gcd, even past the k bound
        let t = TupleSet::parse("5 10").unwrap();
        assert_eq!(is_admissible(&t).witness(), Some(5));
        let t = TupleSet::parse("2 4\n1 1").unwrap();
        assert_eq!(is_admissible(&t).witness(), Some(2));
    }

    #[test]
    fn greedy_subset_given_order() {
        let t = offsets(&[0, 1, 2]);
        assert_eq!(admissible_subset(&t, ScanOrder::Given).unwrap(), vec![0, 2]);
        // already-admissible systems survive whole
        let t = offsets(&[0, 2, 6]);
        assert_eq!(
            admissible_subset(&t, ScanOrder::Given).unwrap(),
            vec![0, 1, 2]
        );
        // coprimality is a precondition here, unlike is_admissible
        let t = TupleSet::parse("2 4\n1 1").unwrap();
        assert!(admissible_subset(&t, ScanOrder::Given).is_err());
    }

    #[test]
    fn seeded_subset_is_reproducible_and_admissible() {
        let t = offsets(&[0, 1, 2, 3, 4, 5, 6, 8]);
        let a = admissible_subset(&t, ScanOrder::Seeded(42)).unwrap();
        let b = admissible_subset(&t, ScanOrder::Seeded(42)).unwrap();
        assert_eq!(a, b);
        assert!(!a.is_empty());
        let picked = TupleSet::new(a.iter().map(|&i| t.forms()[i]).collect()).unwrap();
        assert!(is_admissible(&picked).is_admissible());
        // maximality for the realized order: nothing skipped fits back in
        for i in 0..t.k() {
            if !a.contains(&i) {
                let mut forms: Vec<_> = a.iter().map(|&j| t.forms()[j]).collect();
                forms.push(t.forms()[i]);
                assert!(!is_admissible(&TupleSet::new(forms).unwrap()).is_admissible());
            }
        }
    }

    #[test]
    fn singular_series_twin_anchors() {
        let twin = offsets(&[0, 2]);
        // frozen from the independent hand-derived product over sieved primes
        let s1e3 = singular_series(&twin, 1_000).unwrap();
        assert!((s1e3 - 1.320491488).abs() < 1e-8, "{s1e3}");
        let s1e6 = singular_series(&twin, 1_000_000).unwrap();
        assert!((s1e6 - 1.320323721).abs() < 1e-8, "{s1e6}");
        // successive truncations converge: factor ratio tends to 1
        assert!((s1e6 / s1e3 - 1.0).abs() < 2e-4);
        // vanishes exactly on inadmissible input
        assert_eq!(singular_series(&offsets(&[0, 1]), 100).unwrap(), 0.0);
        assert!(singular_series(&twin, 1).is_err());
        assert!(singular_series(&twin, 2).unwrap() > 0.0);
    }

    #[test]
    fn phi_l_reduces_to_integers() {
        let f = LinearForm::new(2, 1).unwrap();
        let r = phi_l(&f, 3).unwrap(); // phi(6)/phi(2) = 2/1
        assert_eq!(r, Rational::from_integer(2.into()));
        let f = LinearForm::new(1, 5).unwrap();
        assert_eq!(phi_l(&f, 10).unwrap(), Rational::from_integer(4.into()));
        assert_eq!(phi_l(&f, 1).unwrap(), Rational::from_integer(1.into()));
        assert!(phi_l(&f, 0).is_err());
        // spot-check the reduction property on composite slopes
        for (a, q) in [(6i64, 4u64), (12, 9), (30, 25), (8, 6)] {
            let f = LinearForm::new(a, 1).unwrap();
            let r = phi_l(&f, q).unwrap();
            assert_eq!(r.denom(), &num::BigInt::from(1), "phi_l({a}n+1, {q}) = {r}");
        }
    }

    #[test]
    fn shift_examples() {
        let t = TupleSet::parse("3 -5\n2 -7").unwrap();
        let (shifted, s) = shift_to_positive(&t).unwrap();
        assert_eq!(s, 8);
        assert_eq!(shifted.to_string(), "{3n+19, 2n+9}");
        // F(n) = L(n + shift), exactly
        for n in -3i64..20 {
            for (f, l) in shifted.forms().iter().zip(t.forms()) {
                assert_eq!(f.evaluate(n).unwrap(), l.evaluate(n + s).unwrap());
            }
        }
        assert!(shift_to_positive(&offsets(&[0, -2])).is_err());
        assert!(shift_to_positive(&TupleSet::parse("1 -1").unwrap()).is_ok());
    }

    #[test]
    fn parse_rejects_garbage_with_line_numbers() {
        assert!(TupleSet::parse("# all comments\n\n").is_err()); // empty tuple
        let e = TupleSet::parse("1 2\nbogus\n").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        let e = TupleSet::parse("1 2 3\n").unwrap_err();
        assert!(e.to_string().contains("line 1"), "{e}");
        let ok = TupleSet::parse("# twin\n1 0\n1 2\n").unwrap();
        assert_eq!(ok.k(), 2);
    }
}
