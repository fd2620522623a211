//! Property tests: structural invariants checked on randomized inputs,
//! with the brute-force oracles from `common` as referees where one exists.

mod common;

use std::collections::BTreeSet;

use num::BigRational;
use proptest::prelude::*;

use tuplecraft::arith;
use tuplecraft::audit::{self, WindowSet};
use tuplecraft::census;
use tuplecraft::forms::{self, LinearForm, ScanOrder, TupleSet};
use tuplecraft::romanoff;
use tuplecraft::sieve;

/// Distinct linear forms with small coefficients; `coprime_only` restricts
/// to forms usable by the subset selector.
fn tuple_strategy(coprime_only: bool) -> impl Strategy<Value = TupleSet> {
    proptest::collection::btree_set((1i64..=20, -30i64..=30), 1..=5).prop_filter_map(
        "forms must be constructible",
        move |set| {
            let forms: Vec<LinearForm> = set
                .into_iter()
                .filter(|&(a, b)| !coprime_only || arith::gcd(a as i128, b as i128) == 1)
                .map(|(a, b)| LinearForm::new(a, b).expect("slope >= 1"))
                .collect();
            TupleSet::new(forms).ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gcd_agrees_with_euclid(a in 0u64..100_000, b in 0u64..100_000) {
        prop_assert_eq!(
            arith::gcd(a as i128, b as i128),
            common::naive_gcd(a, b) as u128
        );
        prop_assert_eq!(arith::gcd(a as i128, b as i128), arith::gcd(b as i128, a as i128));
        prop_assert_eq!(arith::gcd(-(a as i128), b as i128), arith::gcd(a as i128, b as i128));
    }

    #[test]
    fn phi_matches_coprime_count_and_is_multiplicative(m in 1u64..300, n in 1u64..300) {
        prop_assert_eq!(arith::euler_phi(m).unwrap(), common::naive_phi(m));
        if common::naive_gcd(m, n) == 1 {
            prop_assert_eq!(
                arith::euler_phi(m * n).unwrap(),
                arith::euler_phi(m).unwrap() * arith::euler_phi(n).unwrap()
            );
        }
    }

    #[test]
    fn sieve_windows_glue(lo in 0u64..50_000, a in 1u64..5_000, b in 1u64..5_000) {
        let mid = lo + a;
        let hi = mid + b;
        let left = sieve::sieve_window(lo, mid).unwrap();
        let right = sieve::sieve_window(mid, hi).unwrap();
        let whole = sieve::sieve_window(lo, hi).unwrap();
        prop_assert_eq!(left.count() + right.count(), whole.count());
    }

    #[test]
    fn omega_matches_residue_scan(tuple in tuple_strategy(false), pidx in 0usize..8) {
        let p = [2u64, 3, 5, 7, 11, 13, 17, 19][pidx];
        let pairs: Vec<(i64, i64)> = tuple
            .forms()
            .iter()
            .map(|f| (f.slope(), f.intercept()))
            .collect();
        prop_assert_eq!(forms::omega_p(&tuple, p).unwrap(), common::omega_scan(&pairs, p));
    }

    #[test]
    fn admissibility_matches_witness_scan(tuple in tuple_strategy(false)) {
        let pairs: Vec<(i64, i64)> = tuple
            .forms()
            .iter()
            .map(|f| (f.slope(), f.intercept()))
            .collect();
        let verdict = forms::is_admissible(&tuple);
        match common::admissibility_witness(&pairs) {
            None => prop_assert!(verdict.is_admissible()),
            Some(p) => prop_assert_eq!(verdict.witness(), Some(p)),
        }
    }

    #[test]
    fn singular_series_vanishes_exactly_on_inadmissible(tuple in tuple_strategy(false)) {
        let s = forms::singular_series(&tuple, 200).unwrap();
        if forms::is_admissible(&tuple).is_admissible() {
            prop_assert!(s > 0.0);
        } else {
            prop_assert_eq!(s, 0.0);
        }
    }

    #[test]
    fn greedy_subset_is_admissible_with_valid_indices(
        tuple in tuple_strategy(true),
        seed in proptest::option::of(any::<u64>()),
    ) {
        let order = match seed {
            None => ScanOrder::Given,
            Some(s) => ScanOrder::Seeded(s),
        };
        let idx = forms::admissible_subset(&tuple, order).unwrap();
        prop_assert!(!idx.is_empty());
        let distinct: BTreeSet<usize> = idx.iter().copied().collect();
        prop_assert_eq!(distinct.len(), idx.len());
        prop_assert!(idx.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(idx.iter().all(|&i| i < tuple.k()));
        let sub = TupleSet::new(idx.iter().map(|&i| tuple.forms()[i]).collect()).unwrap();
        prop_assert!(forms::is_admissible(&sub).is_admissible());
    }

    #[test]
    fn census_count_is_monotone_in_threshold(tuple in tuple_strategy(false), m in 0u32..4) {
        let lower = census::census_window(&tuple, 10, 400, m).unwrap();
        let higher = census::census_window(&tuple, 10, 400, m + 1).unwrap();
        prop_assert!(higher.count <= lower.count);
        // histogram partitions the window regardless of threshold
        let pts: u64 = lower.histogram.values().sum();
        prop_assert_eq!(pts, 390);
    }

    #[test]
    fn prime_classes_partition_the_count(x in 50u64..20_000, q in 1u64..12) {
        let total = sieve::prime_count(x as f64).unwrap();
        let mut by_class = 0u64;
        for a in 0..q {
            by_class += sieve::prime_count_ap(x as f64, q, a as i64).unwrap();
        }
        prop_assert_eq!(by_class, total);
    }

    #[test]
    fn hyp1_matches_direct_enumeration(
        x in 2u64..60,
        qmax in 1u64..12,
        extra in proptest::collection::btree_set(1u64..200, 1..12),
    ) {
        // explicit sets
        let members: Vec<u64> = extra.into_iter().collect();
        let set = WindowSet::explicit(members.clone(), x).unwrap();
        if set.count() > 0 {
            let got = audit::hyp1_sum(&set, qmax, 1).unwrap();
            prop_assert_eq!(got.sum.exact.unwrap(), common::hyp1_direct(&members, x, qmax));
        }
        // naturals windows against the materialized oracle
        let nats = WindowSet::naturals(x).unwrap();
        let got = audit::hyp1_sum(&nats, qmax, 1).unwrap();
        let window = common::naturals_window(x);
        prop_assert_eq!(got.sum.exact.unwrap(), common::hyp1_direct(&window, x, qmax));
    }

    #[test]
    fn hyp3_matches_direct_enumeration(x in 2u64..400, q in 1u64..20) {
        let window = common::naturals_window(x);
        let (max_direct, ratio_direct) = common::hyp3_direct(&window, x, q);
        let got = audit::hyp3_concentration(&WindowSet::naturals(x).unwrap(), q).unwrap();
        prop_assert_eq!(got.max_count, max_direct);
        prop_assert_eq!(got.ratio.exact.unwrap(), ratio_direct);
    }

    #[test]
    fn representation_moments_match_pointwise_counts(
        set in proptest::collection::btree_set(1u64..80, 1..6),
        x in 3u64..250,
    ) {
        let members: Vec<u64> = set.into_iter().collect();
        let p = romanoff::profile(&members, x).unwrap();
        let mut sum = 0u64;
        let mut sum2 = 0u64;
        let mut rep = 0u64;
        for n in 1..=x {
            let f = common::romanoff_f(&members, n);
            prop_assert_eq!(romanoff::representation_count(&members, n).unwrap(), f);
            sum += f;
            sum2 += f * f;
            rep += (f > 0) as u64;
        }
        prop_assert_eq!(p.sum_f, sum);
        prop_assert_eq!(p.sum_f2, sum2);
        prop_assert_eq!(p.represented, rep);
        // Cauchy–Schwarz floor
        if let Some(cs) = p.cs_bound.exact {
            prop_assert!(BigRational::from_integer(rep.into()) >= cs);
        }
    }

    #[test]
    fn shifted_tuples_evaluate_identically(offsets in proptest::collection::btree_set(1u64..60, 1..5)) {
        let shifts: Vec<u64> = offsets.into_iter().collect();
        let raw = census::corollary1_tuple(&shifts).unwrap();
        let (shifted, s) = forms::shift_to_positive(&raw).unwrap();
        for n in -5i64..40 {
            for (f, g) in raw.forms().iter().zip(shifted.forms()) {
                prop_assert_eq!(g.evaluate(n).unwrap(), f.evaluate(n + s).unwrap());
            }
        }
    }
}
