//! Equidistribution audits: how evenly a set — and the primes a linear form
//! finds inside it — spreads over residue classes.
//!
//! The window under audit is always A(x) = {n ∈ A : x ≤ n < 2x}. Every
//! countable quantity here is exact: class counts are integers, expected
//! shares are rationals (#A(x)/q, #P/φ_L(q)), and the summed discrepancies
//! stay rational to the last digit. Floating point enters only through the
//! logarithmic integral (the prime-counting comparison) and the report
//! annotations.

use crate::arith::{self, LiTable};
use crate::forms::{self, LinearForm, TupleSet};
use crate::report::{Quantity, Rational};
use crate::sieve::{self, PrimeTable};
use crate::{parallel, Error, Result};
use num::{Signed, ToPrimitive, Zero};
use serde::Serialize;

/// The set being audited: the naturals, or an explicit finite list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetSource {
    Naturals,
    Explicit(Vec<u64>),
}

/// A set together with the window anchor x; all counting happens inside
/// [x, 2x).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowSet {
    source: SetSource,
    x: u64,
}

/// Members may not exceed 2^62: window arithmetic and form evaluation need
/// headroom in i64/u64.
const MEMBER_CAP: u64 = 1 << 62;

impl WindowSet {
    pub fn naturals(x: u64) -> Result<WindowSet> {
        if x == 0 {
            return Err(Error::domain("window anchor x must be positive"));
        }
        if x > MEMBER_CAP {
            return Err(Error::UnsupportedRange(format!("x = {x} exceeds 2^62")));
        }
        Ok(WindowSet {
            source: SetSource::Naturals,
            x,
        })
    }

    /// Explicit set; members must be distinct (this is a set, and silent
    /// multiplicity would skew every count).
    pub fn explicit(mut members: Vec<u64>, x: u64) -> Result<WindowSet> {
        if x == 0 {
            return Err(Error::domain("window anchor x must be positive"));
        }
        if x > MEMBER_CAP {
            return Err(Error::UnsupportedRange(format!("x = {x} exceeds 2^62")));
        }
        members.sort_unstable();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::domain(format!("duplicate member {}", w[0])));
        }
        if members.last().is_some_and(|&m| m > MEMBER_CAP) {
            return Err(Error::UnsupportedRange("set member exceeds 2^62".into()));
        }
        Ok(WindowSet {
            source: SetSource::Explicit(members),
            x,
        })
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn is_naturals(&self) -> bool {
        matches!(self.source, SetSource::Naturals)
    }

    /// #A(x): members in [x, 2x). For the naturals this is x itself.
    pub fn count(&self) -> u64 {
        match &self.source {
            SetSource::Naturals => self.x,
            SetSource::Explicit(_) => self.window_members().len() as u64,
        }
    }

    /// #A(x; q, a): members of the window in the class a mod q.
    pub fn count_class(&self, q: u64, a: u64) -> Result<u64> {
        if q == 0 {
            return Err(Error::domain("count_class needs modulus q >= 1"));
        }
        Ok(self.class_counts(q)?[(a % q) as usize])
    }

    /// All q class counts in one sweep.
    fn class_counts(&self, q: u64) -> Result<Vec<u64>> {
        if q == 0 {
            return Err(Error::domain("class_counts needs modulus q >= 1"));
        }
        let mut counts = vec![0u64; q as usize];
        match &self.source {
            SetSource::Naturals => {
                // #{n in [x, 2x) : n ≡ a (mod q)} by two prefix counts.
                let prefix = |n: u64, a: u64| n.saturating_sub(a).div_ceil(q);
                for (a, c) in counts.iter_mut().enumerate() {
                    let a = a as u64;
                    *c = prefix(2 * self.x, a) - prefix(self.x, a);
                }
            }
            SetSource::Explicit(_) => {
                for &n in self.window_members() {
                    counts[(n % q) as usize] += 1;
                }
            }
        }
        Ok(counts)
    }

    /// The window members as a slice (explicit sets only; naturals windows
    /// are iterated, not materialized).
    fn window_members(&self) -> &[u64] {
        match &self.source {
            SetSource::Naturals => unreachable!("naturals windows are not materialized"),
            SetSource::Explicit(m) => {
                let lo = m.partition_point(|&n| n < self.x);
                let hi = m.partition_point(|&n| n < 2 * self.x);
                &m[lo..hi]
            }
        }
    }

    /// Visit each window member ascending.
    fn for_each_member(&self, mut f: impl FnMut(u64)) {
        match &self.source {
            SetSource::Naturals => (self.x..2 * self.x).for_each(&mut f),
            SetSource::Explicit(_) => self.window_members().iter().copied().for_each(&mut f),
        }
    }
}

/// Shared audit parameters: window anchor, the exponent θ that turns into
/// the modulus ceiling Q = ⌊x^θ⌋, the prime B excluded from moduli, and the
/// k that drives report annotations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AuditConfig {
    pub x: u64,
    pub theta: f64,
    pub b: u64,
    pub k: usize,
}

impl AuditConfig {
    pub fn new(x: u64, theta: f64, b: u64, k: usize) -> Result<AuditConfig> {
        if x == 0 {
            return Err(Error::domain("audit x must be positive"));
        }
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::domain(format!(
                "theta must lie in (0,1), got {theta}"
            )));
        }
        if !arith::is_prime(b) {
            return Err(Error::domain(format!("B = {b} is not prime")));
        }
        if k == 0 {
            return Err(Error::domain("annotation k must be >= 1"));
        }
        Ok(AuditConfig { x, theta, b, k })
    }

    /// Q = ⌊x^θ⌋, at least 1. The nudge keeps exact powers from flooring
    /// one short after f64 rounding.
    pub fn q_max(&self) -> u64 {
        (((self.x as f64).powf(self.theta)) + 1e-9).floor().max(1.0) as u64
    }
}

/// One modulus record: the worst residue class and its exact discrepancy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscrepancyTerm {
    pub q: u64,
    pub worst_a: Option<u64>,
    pub value: Quantity,
}

/// Raw sizes and the formal right side #·/(ln x)^(100k²), carried purely as
/// an annotation (it is astronomically small at desk scale, and that is
/// the point of printing it).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparator {
    pub set_size: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime_count: Option<u64>,
    pub k: usize,
    pub formal_rhs_log10: f64,
    pub formal_rhs: f64,
}

fn comparator(x: u64, k: usize, set_size: u64, prime_count: Option<u64>) -> Comparator {
    let base = prime_count.unwrap_or(set_size).max(1) as f64;
    let log10 = base.log10() - 100.0 * (k as f64) * (k as f64) * (x as f64).ln().log10();
    Comparator {
        set_size,
        prime_count,
        k,
        formal_rhs_log10: log10,
        formal_rhs: 10f64.powf(log10), // underflows to 0 gracefully
    }
}

/// Summed worst-class discrepancies, one term per modulus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscrepancyReport {
    pub sum: Quantity,
    pub terms: Vec<DiscrepancyTerm>,
    pub comparator: Comparator,
    pub x: u64,
    pub q_max: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus_filter: Option<u64>,
}

/// Σ_{q ≤ qmax} max_a |#A(x;q,a) − #A(x)/q|, exact. `k` only labels the
/// comparator annotation.
pub fn hyp1_sum(set: &WindowSet, qmax: u64, k: usize) -> Result<DiscrepancyReport> {
    hyp1_impl(set, qmax, k, true)
}

/// Sequential variant of [`hyp1_sum`].
pub fn hyp1_sum_seq(set: &WindowSet, qmax: u64, k: usize) -> Result<DiscrepancyReport> {
    hyp1_impl(set, qmax, k, false)
}

fn hyp1_impl(set: &WindowSet, qmax: u64, k: usize, par: bool) -> Result<DiscrepancyReport> {
    if qmax == 0 {
        return Err(Error::domain("hyp1_sum needs Q >= 1"));
    }
    if set.x() < 2 {
        return Err(Error::domain("hyp1_sum needs x >= 2"));
    }
    let total = set.count();
    let terms = parallel::map_collect(par, (1..=qmax).collect(), |q| {
        let counts = set.class_counts(q).expect("q >= 1");
        worst_class_term(q, &counts, total)
    });
    let sum = sum_terms(&terms);
    Ok(DiscrepancyReport {
        x: set.x(),
        q_max: qmax,
        modulus_filter: None,
        sum,
        terms,
        comparator: comparator(set.x(), k, total, None),
    })
}

/// max_a |counts[a] − total/q|, exact: the difference has denominator q.
fn worst_class_term(q: u64, counts: &[u64], total: u64) -> DiscrepancyTerm {
    let expected = Rational::new(total.into(), q.into());
    let mut worst: Option<(u64, Rational)> = None;
    for (a, &c) in counts.iter().enumerate() {
        let d = (Rational::from_integer(c.into()) - &expected).abs();
        let better = match &worst {
            None => true,
            Some((_, w)) => d > *w,
        };
        if better {
            worst = Some((a as u64, d));
        }
    }
    let (worst_a, value) = worst.expect("q >= 1 gives at least one class");
    DiscrepancyTerm {
        q,
        worst_a: Some(worst_a),
        value: Quantity::from_rational(value),
    }
}

fn sum_terms(terms: &[DiscrepancyTerm]) -> Quantity {
    let mut acc = Rational::zero();
    let mut exact = true;
    for t in terms {
        match &t.value.exact {
            Some(r) => acc += r,
            None => exact = false,
        }
    }
    if exact {
        Quantity::from_rational(acc)
    } else {
        Quantity::approx(terms.iter().map(|t| t.value.float).sum())
    }
}

/// Σ_{q ≤ qmax, (q,B)=1} max_{a: (L(a),q)=1} |#P(x;q,a) − #P(x)/φ_L(q)|,
/// exact, where #P counts window members n with L(n) prime. Classes whose
/// values share a factor with q are excluded from the max entirely; a
/// modulus with no eligible class contributes 0 with no worst residue.
pub fn hyp2_sum(
    set: &WindowSet,
    form: &LinearForm,
    bmod: u64,
    qmax: u64,
    k: usize,
) -> Result<DiscrepancyReport> {
    hyp2_impl(set, form, bmod, qmax, k, true)
}

/// Sequential variant of [`hyp2_sum`].
pub fn hyp2_sum_seq(
    set: &WindowSet,
    form: &LinearForm,
    bmod: u64,
    qmax: u64,
    k: usize,
) -> Result<DiscrepancyReport> {
    hyp2_impl(set, form, bmod, qmax, k, false)
}

fn hyp2_impl(
    set: &WindowSet,
    form: &LinearForm,
    bmod: u64,
    qmax: u64,
    k: usize,
    par: bool,
) -> Result<DiscrepancyReport> {
    if qmax == 0 {
        return Err(Error::domain("hyp2_sum needs Q >= 1"));
    }
    if set.x() < 2 {
        return Err(Error::domain("hyp2_sum needs x >= 2"));
    }
    if !arith::is_prime(bmod) {
        return Err(Error::domain(format!("B = {bmod} is not prime")));
    }
    let preimages = prime_preimages(set, form)?;
    let pcount = preimages.len() as u64;
    let moduli: Vec<u64> = (1..=qmax).filter(|q| q % bmod != 0).collect();
    let terms = parallel::map_collect(par, moduli, |q| {
        let phi_l = forms::phi_l(form, q).expect("q >= 1");
        let expected = Rational::from_integer((pcount).into()) / &phi_l;
        let mut counts = vec![0u64; q as usize];
        for &n in &preimages {
            counts[(n % q) as usize] += 1;
        }
        let mut worst: Option<(u64, Rational)> = None;
        for a in 0..q {
            let value = form.evaluate(a as i64).expect("residues are small");
            if arith::gcd(value, q as i128) != 1 {
                continue;
            }
            let d = (Rational::from_integer(counts[a as usize].into()) - &expected).abs();
            if worst.as_ref().is_none_or(|(_, w)| d > *w) {
                worst = Some((a, d));
            }
        }
        match worst {
            Some((a, value)) => DiscrepancyTerm {
                q,
                worst_a: Some(a),
                value: Quantity::from_rational(value),
            },
            None => DiscrepancyTerm {
                q,
                worst_a: None,
                value: Quantity::from_rational(Rational::zero()),
            },
        }
    });
    let sum = sum_terms(&terms);
    Ok(DiscrepancyReport {
        x: set.x(),
        q_max: qmax,
        modulus_filter: Some(bmod),
        sum,
        terms,
        comparator: comparator(set.x(), k, set.count(), Some(pcount)),
    })
}

/// #P_{L,A}(x): window members n with L(n) prime. Counting goes through a
/// sieved table over the form's value range — one arithmetic-progression
/// sweep, no per-n primality tests.
pub fn count_prime_values(set: &WindowSet, form: &LinearForm) -> Result<u64> {
    Ok(prime_preimages(set, form)?.len() as u64)
}

/// Window members n with L(n) prime, ascending.
fn prime_preimages(set: &WindowSet, form: &LinearForm) -> Result<Vec<u64>> {
    let x = set.x();
    let (n_lo, n_hi) = (x as i64, (2 * x - 1) as i64); // inclusive n range
    let vlo = form.evaluate(n_lo)?;
    let vhi = form.evaluate(n_hi)?;
    let mut out = Vec::new();
    if vhi < 2 {
        return Ok(out);
    }
    let tlo = vlo.max(2) as u64;
    let thi = u64::try_from(vhi)
        .ok()
        .and_then(|v| v.checked_add(1))
        .ok_or_else(|| {
            Error::UnsupportedRange(format!("value range of {form} reaches past 2^64"))
        })?;
    let table = sieve::sieve_window(tlo, thi)?;
    set.for_each_member(|n| {
        let v = form.evaluate(n as i64).expect("endpoints were checked");
        if v >= 2 && table.contains(v as u64) {
            out.push(n);
        }
    });
    Ok(out)
}

/// Worst-class concentration for one modulus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationReport {
    pub x: u64,
    pub q: u64,
    pub set_size: u64,
    pub max_count: u64,
    pub worst_a: u64,
    /// max_count relative to the even share #A(x)/q.
    pub ratio: Quantity,
    /// Whether the worst class stays within twice the even share.
    pub within_double: bool,
}

/// max_a #A(x;q,a) and its ratio to #A(x)/q.
pub fn hyp3_concentration(set: &WindowSet, q: u64) -> Result<ConcentrationReport> {
    if q == 0 {
        return Err(Error::domain("hyp3_concentration needs q >= 1"));
    }
    let total = set.count();
    if total == 0 {
        return Err(Error::domain("window is empty; concentration undefined"));
    }
    let counts = set.class_counts(q)?;
    let (worst_a, &max_count) = counts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0))) // smallest a on ties
        .expect("q >= 1");
    let ratio = Rational::new(
        (max_count as i128 * q as i128).into(),
        (total as i128).into(),
    );
    let within_double = ratio <= Rational::from_integer(2.into());
    Ok(ConcentrationReport {
        x: set.x(),
        q,
        set_size: total,
        max_count,
        worst_a: worst_a as u64,
        ratio: Quantity::from_rational(ratio),
        within_double,
    })
}

/// Prime-counting discrepancy summed over moduli, with the sup over the
/// inner window evaluated exactly at the jump points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BvReport {
    pub x: u64,
    pub rmax: u64,
    pub b: u64,
    pub ucap: u64,
    pub sum: Quantity,
    pub terms: Vec<DiscrepancyTerm>,
    pub c2: f64,
    pub c3: f64,
    /// c2 · x · exp(−c3 √ln x), the formal right side under the stand-in
    /// constants supplied by the caller.
    pub formal_rhs: f64,
    /// The exceptional-modulus branch is out of scope; the report says so
    /// rather than leaving the omission silent.
    pub exceptional_branch: &'static str,
}

/// Σ_{r ≤ rmax, (r,B)=1} max_{2 ≤ u ≤ ucap} max_{(b,r)=1} |π(u;r,b) − li(u)/φ(r)|.
///
/// π(u;r,b) is a step function jumping at primes, li is increasing, so on
/// each step the sup sits at an endpoint: it suffices to test
/// |j − li(p)/φ(r)| and |j−1 − li(p)/φ(r)| at the j-th class prime p, plus
/// the right endpoint u = ucap. That makes the scan exact — no u grid.
pub fn bv_discrepancy(
    x: u64,
    rmax: u64,
    bmod: u64,
    ucap: u64,
    c2: f64,
    c3: f64,
) -> Result<BvReport> {
    bv_impl(x, rmax, bmod, ucap, c2, c3, true)
}

/// Sequential variant of [`bv_discrepancy`].
pub fn bv_discrepancy_seq(
    x: u64,
    rmax: u64,
    bmod: u64,
    ucap: u64,
    c2: f64,
    c3: f64,
) -> Result<BvReport> {
    bv_impl(x, rmax, bmod, ucap, c2, c3, false)
}

fn bv_impl(
    x: u64,
    rmax: u64,
    bmod: u64,
    ucap: u64,
    c2: f64,
    c3: f64,
    par: bool,
) -> Result<BvReport> {
    if rmax == 0 {
        return Err(Error::domain("bv_discrepancy needs rmax >= 1"));
    }
    if ucap < 2 {
        return Err(Error::domain("bv_discrepancy needs U >= 2"));
    }
    if x < 2 {
        return Err(Error::domain("bv_discrepancy needs x >= 2"));
    }
    if !arith::is_prime(bmod) {
        return Err(Error::domain(format!("B = {bmod} is not prime")));
    }
    let table = sieve::sieve_window(0, ucap + 1)?;
    let li = LiTable::build(ucap)?;
    let moduli: Vec<u64> = (1..=rmax).filter(|r| r % bmod != 0).collect();
    let terms = parallel::map_collect(par, moduli, |r| bv_modulus_term(&table, &li, r, ucap));
    let total: f64 = terms.iter().map(|t| t.value.float).sum();
    let formal_rhs = c2 * x as f64 * (-c3 * (x as f64).ln().sqrt()).exp();
    Ok(BvReport {
        x,
        rmax,
        b: bmod,
        ucap,
        sum: Quantity::approx(total),
        terms,
        c2,
        c3,
        formal_rhs,
        exceptional_branch: "not evaluated",
    })
}

/// Exact sup scan for one modulus r: stream the primes once, maintain the
/// running count per coprime class, test both sides of every jump.
fn bv_modulus_term(table: &PrimeTable, li: &LiTable, r: u64, ucap: u64) -> DiscrepancyTerm {
    let phi = arith::euler_phi(r).expect("r >= 1") as f64;
    let eligible: Vec<bool> = (0..r).map(|b| arith::gcd_u64(b, r) == 1).collect();
    let mut counts = vec![0u64; r as usize];
    let mut sups = vec![0.0f64; r as usize];
    for p in table.iter() {
        let cls = (p % r) as usize;
        if !eligible[cls] {
            continue;
        }
        let j = counts[cls] + 1;
        counts[cls] = j;
        let expected = li.get(p) / phi;
        let lower = (j as f64 - 1.0 - expected).abs(); // just before the jump
        let upper = (j as f64 - expected).abs(); // at and after the jump
        if lower > sups[cls] {
            sups[cls] = lower;
        }
        if upper > sups[cls] {
            sups[cls] = upper;
        }
    }
    // Right endpoint u = ucap closes the final step of every class; classes
    // with no primes at all peak there too (li/φ alone).
    let end = li.get(ucap) / phi;
    let mut worst: Option<(u64, f64)> = None;
    for b in 0..r as usize {
        if !eligible[b] {
            continue;
        }
        let tail = (counts[b] as f64 - end).abs();
        let sup = sups[b].max(tail);
        if worst.is_none_or(|(_, w)| sup > w) {
            worst = Some((b as u64, sup));
        }
    }
    let (worst_b, sup) = worst.expect("every r >= 1 has a coprime class");
    DiscrepancyTerm {
        q: r,
        worst_a: Some(worst_b),
        value: Quantity::approx(sup),
    }
}

/// The weighted prime-density statistic and its two thresholds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaReport {
    pub x: u64,
    pub k: usize,
    pub b: u64,
    pub set_size: u64,
    /// #P_{Lᵢ,A}(x) per form, in tuple order.
    pub prime_counts: Vec<u64>,
    /// δ scaled down by ln x — everything exact.
    pub scaled: Quantity,
    pub delta: f64,
    pub exceeds_one_eighth: bool,
    /// 1/ln k; undefined for k = 1.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exceeds_log_threshold: Option<bool>,
}

/// δ = (1/k)(φ(B)/B) Σᵢ (φ(aᵢ)/aᵢ) · #P_{Lᵢ,A}(x) · ln x / #A(x).
/// The rational part is exact; ln x is the only float factor.
pub fn delta_statistic(set: &WindowSet, tuple: &TupleSet, bmod: u64) -> Result<DeltaReport> {
    if set.x() < 3 {
        return Err(Error::domain("delta_statistic needs x >= 3"));
    }
    if !arith::is_prime(bmod) {
        return Err(Error::domain(format!("B = {bmod} is not prime")));
    }
    let total = set.count();
    if total == 0 {
        return Err(Error::domain("window is empty; delta undefined"));
    }
    let prime_counts = parallel::map_collect(true, tuple.forms().to_vec(), |f| {
        count_prime_values(set, &f)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let phi_b = arith::euler_phi(bmod)?;
    let mut weighted = Rational::zero();
    for (f, &pc) in tuple.forms().iter().zip(&prime_counts) {
        let a = f.slope() as u64;
        let phi_a = arith::euler_phi(a)?;
        weighted += Rational::new((phi_a as i128 * pc as i128).into(), (a as i128).into());
    }
    let scaled = weighted * Rational::new(phi_b.into(), bmod.into())
        / Rational::from_integer((tuple.k() as u64).into())
        / Rational::from_integer(total.into());
    let delta = scaled.to_f64().unwrap_or(f64::NAN) * (set.x() as f64).ln();
    let k = tuple.k();
    let log_threshold = (k > 1).then(|| 1.0 / (k as f64).ln());
    Ok(DeltaReport {
        x: set.x(),
        k,
        b: bmod,
        set_size: total,
        prime_counts,
        scaled: Quantity::from_rational(scaled),
        delta,
        exceeds_one_eighth: delta > 0.125,
        log_threshold,
        exceeds_log_threshold: log_threshold.map(|t| delta > t),
    })
}

/// The modulus the audits exclude, and where it came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChooseBReport {
    pub x: f64,
    pub threshold: f64,
    pub b: u64,
    pub exceptional_branch: &'static str,
}

/// Smallest prime exceeding 0.9·ln ln x. Needs x > e so the threshold is
/// positive. The alternative branch that would instead name an exceptional
/// modulus is out of scope and flagged as such in the report.
pub fn choose_b(x: f64) -> Result<ChooseBReport> {
    if x <= std::f64::consts::E || x.is_nan() {
        return Err(Error::domain(format!(
            "choose_b needs x > e so ln ln x > 0, got {x}"
        )));
    }
    let threshold = 0.9 * x.ln().ln();
    Ok(ChooseBReport {
        x,
        threshold,
        b: arith::next_prime_above(threshold),
        exceptional_branch: "not evaluated",
    })
}
