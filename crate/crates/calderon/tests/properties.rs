//! Property tests for the structural invariants: equimeasurability of the
//! rearrangement, domination and monotonicity of the average, homogeneity,
//! and the two-sided norm inequality.

use std::sync::OnceLock;

use proptest::prelude::*;

use calderon::{
    greedy_subset_norm, k_kappa, marcinkiewicz_norm, weak_norm, BilateralChecker,
    SharpnessOptions, StepFunction, Weight,
};

fn pieces_strategy(max_len: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.0f64..10.0, 0.01f64..1.0), 1..max_len)
}

fn checker_w2() -> &'static BilateralChecker {
    static CHECKER: OnceLock<BilateralChecker> = OnceLock::new();
    CHECKER.get_or_init(|| {
        BilateralChecker::new(Weight::power(2.0).expect("p = 2 is valid"))
            .expect("gamma(w_2) converges")
    })
}

proptest! {
    #[test]
    fn tails_are_exactly_equimeasurable(pieces in pieces_strategy(40)) {
        let f = StepFunction::new(pieces).unwrap();
        let profile = f.rearrange();
        let mut thresholds = vec![0.0, 11.0];
        for p in f.pieces() {
            thresholds.push(p.value);
            thresholds.push(p.value * (1.0 - 1e-9));
            thresholds.push(p.value * (1.0 + 1e-9));
        }
        for thr in thresholds {
            let direct = f.tail(thr).unwrap();
            let via_profile = profile.tail(thr).unwrap();
            prop_assert_eq!(
                direct.to_bits(), via_profile.to_bits(),
                "threshold {}: {} vs {}", thr, direct, via_profile
            );
        }
    }

    #[test]
    fn tail_is_nonincreasing_and_starts_at_total_mass(pieces in pieces_strategy(40)) {
        let f = StepFunction::new(pieces).unwrap();
        prop_assert_eq!(f.tail(0.0).unwrap(), f.rearrange().total_mass());
        let mut prev = f64::INFINITY;
        for i in 0..=20 {
            let t = f.tail(i as f64 * 0.5).unwrap();
            prop_assert!(t <= prev);
            prev = t;
        }
    }

    #[test]
    fn rearrangement_preserves_the_integral(pieces in pieces_strategy(40)) {
        let f = StepFunction::new(pieces).unwrap();
        let profile = f.rearrange();
        let direct = f.integral();
        prop_assert!(
            (direct - profile.total_integral()).abs() <= 1e-12 * direct.max(1.0),
            "{} vs {}", direct, profile.total_integral()
        );
    }

    #[test]
    fn average_dominates_and_decreases(pieces in pieces_strategy(40)) {
        let f = StepFunction::new(pieces).unwrap();
        let profile = f.rearrange();
        let m = profile.total_mass();
        let mut prev = f64::INFINITY;
        for i in 1..=64 {
            let t = 1.5 * m * i as f64 / 64.0;
            let star = if t < m { profile.value_at(t).unwrap() } else { 0.0 };
            let avg = profile.double_star(t).unwrap();
            prop_assert!(avg >= star - 1e-12 * star.abs());
            prop_assert!(avg <= prev * (1.0 + 1e-12));
            prev = avg;
        }
    }

    #[test]
    fn rearrangement_is_homogeneous(pieces in pieces_strategy(30), c in 0.01f64..100.0) {
        let f = StepFunction::new(pieces.clone()).unwrap();
        let scaled = StepFunction::new(pieces.iter().map(|&(v, m)| (v * c, m))).unwrap();
        let (a, b) = (f.rearrange(), scaled.rearrange());
        prop_assert_eq!(a.segment_count(), b.segment_count());
        for i in 0..a.segment_count() {
            let (s0, e0, v0) = a.segment(i);
            let (s1, e1, v1) = b.segment(i);
            // Scaling by c > 0 keeps the order and the tie pattern, so the
            // breakpoints are the same mass sums bit for bit.
            prop_assert_eq!(s0.to_bits(), s1.to_bits());
            prop_assert_eq!(e0.to_bits(), e1.to_bits());
            prop_assert_eq!((v0 * c).to_bits(), v1.to_bits());
        }
    }

    #[test]
    fn norms_are_ordered_and_bounded(pieces in pieces_strategy(40)) {
        let checker = checker_w2();
        let f = StepFunction::new(pieces).unwrap();
        let report = checker.check(&f);
        prop_assert!(report.lower_ok, "weak {} > marc {}", report.weak_norm, report.marcinkiewicz_norm);
        prop_assert!(report.upper_ok, "marc {} > gamma*weak {}", report.marcinkiewicz_norm, report.gamma_value * report.weak_norm);
    }

    #[test]
    fn norms_are_homogeneous(pieces in pieces_strategy(30), c in 0.01f64..100.0) {
        let w = checker_w2().weight();
        let f = StepFunction::new(pieces.clone()).unwrap();
        let scaled = StepFunction::new(pieces.iter().map(|&(v, m)| (v * c, m))).unwrap();
        let (a, b) = (weak_norm(&f, w).unwrap(), weak_norm(&scaled, w).unwrap());
        prop_assert!((b.value - c * a.value).abs() <= 1e-10 * b.value.max(1e-300));
        let (a, b) = (
            marcinkiewicz_norm(&f, w).unwrap(),
            marcinkiewicz_norm(&scaled, w).unwrap(),
        );
        prop_assert!((b.value - c * a.value).abs() <= 1e-9 * b.value.max(1e-300));
    }

    #[test]
    fn raising_a_value_never_lowers_the_norms(
        pieces in pieces_strategy(30),
        bump in 0.1f64..5.0,
        pick in 0usize..30,
    ) {
        let w = checker_w2().weight();
        let f = StepFunction::new(pieces.clone()).unwrap();
        let i = pick % pieces.len();
        let mut raised = pieces;
        raised[i].0 += bump;
        let g = StepFunction::new(raised).unwrap();
        let slack = 1e-10;
        prop_assert!(weak_norm(&g, w).unwrap().value >= weak_norm(&f, w).unwrap().value - slack);
        prop_assert!(
            marcinkiewicz_norm(&g, w).unwrap().value
                >= marcinkiewicz_norm(&f, w).unwrap().value - slack
        );
    }

    #[test]
    fn greedy_reformulation_matches_the_norm(pieces in pieces_strategy(20)) {
        let w = checker_w2().weight();
        let f = StepFunction::new(pieces).unwrap();
        let marc = marcinkiewicz_norm(&f, w).unwrap().value;
        let greedy = greedy_subset_norm(&f, w).unwrap();
        prop_assert!((marc - greedy).abs() <= 1e-8 * marc.max(1.0), "{} vs {}", marc, greedy);
    }

    #[test]
    fn extremal_ratio_stays_at_least_one(kappa in 0.01f64..1000.0) {
        let w = checker_w2().weight();
        let rep = k_kappa(w, kappa, SharpnessOptions::default()).unwrap();
        prop_assert!(rep.k >= 1.0 - 1e-9, "kappa {}: K = {}", kappa, rep.k);
        prop_assert!(
            (rep.k - rep.closed_form_k.unwrap()).abs() < 1e-6,
            "kappa {}: K = {} vs closed {}",
            kappa, rep.k, rep.closed_form_k.unwrap()
        );
    }
}
