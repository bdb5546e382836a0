use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use qtemp_core::spin::{
    brute_force_distributions, no_signaling_report, post_measurement_distribution,
    pre_measurement_distribution, temperature_shifts,
};
use qtemp_core::{BranchRule, EnergySpectrum, SpinEnsemble, SpinTemperature, TemperatureMap};

fn ensemble() -> impl Strategy<Value = SpinEnsemble> {
    (1u64..=20).prop_flat_map(|n| (0..=2 * n).prop_map(move |m| SpinEnsemble::new(2 * n, m, 1.0).unwrap()))
}

fn small_ensemble() -> impl Strategy<Value = SpinEnsemble> {
    (1u64..=8).prop_flat_map(|n| (0..=2 * n).prop_map(move |m| SpinEnsemble::new(2 * n, m, 1.0).unwrap()))
}

proptest! {
    #[test]
    fn distributions_are_normalised(sys in ensemble()) {
        let pre = pre_measurement_distribution(&sys, sys.half()).unwrap();
        prop_assert!(pre.total().is_one());
        let post = post_measurement_distribution(&sys, BranchRule::Counting);
        prop_assert!(post.total().is_one());
        let ms: Vec<u64> = pre.entries.iter().map(|e| e.m).collect();
        prop_assert_eq!(ms, sys.subsystem_range().collect::<Vec<_>>());
    }

    #[test]
    fn measurement_does_not_signal(sys in ensemble()) {
        let r = no_signaling_report(&sys, BranchRule::Counting);
        prop_assert!(r.holds);
        prop_assert!(r.max_deviation.is_zero());
    }

    #[test]
    fn enumeration_matches_closed_forms(sys in small_ensemble()) {
        let (pre, post) = brute_force_distributions(&sys, BranchRule::Counting).unwrap();
        prop_assert!(pre.same_probabilities(&pre_measurement_distribution(&sys, sys.half()).unwrap()));
        prop_assert!(post.same_probabilities(&post_measurement_distribution(&sys, BranchRule::Counting)));
    }

    #[test]
    fn enumeration_honours_literal_weights(sys in small_ensemble()) {
        let (_, post) = brute_force_distributions(&sys, BranchRule::PaperLiteral).unwrap();
        prop_assert!(post.same_probabilities(&post_measurement_distribution(&sys, BranchRule::PaperLiteral)));
    }

    #[test]
    fn shift_signs(n in 3u64..2000, frac in 0.0f64..1.0) {
        let m = 2 + ((n - 3) as f64 * frac) as u64;
        let s = temperature_shifts(2 * n, m, 1.0).unwrap();
        prop_assert!(s.ground_exact > 0.0);
        prop_assert!(s.excited_exact < 0.0);
        prop_assert!(s.ground_asymptotic > 0.0);
        prop_assert!(s.excited_asymptotic < 0.0);
    }
}

#[test]
fn small_system_examples() {
    let half = BigRational::new(1.into(), 2.into());
    let sys = SpinEnsemble::new(4, 1, 1.0).unwrap();
    let pre = pre_measurement_distribution(&sys, 2).unwrap();
    assert_eq!(pre.probability(0), Some(&half));
    assert_eq!(pre.probability(1), Some(&half));

    let sys = SpinEnsemble::new(4, 2, 1.0).unwrap();
    let pre = pre_measurement_distribution(&sys, 2).unwrap();
    let sixth = BigRational::new(1.into(), 6.into());
    assert_eq!(pre.probability(0), Some(&sixth));
    assert_eq!(pre.probability(1), Some(&BigRational::new(2.into(), 3.into())));
    assert_eq!(pre.probability(2), Some(&sixth));

    let sys = SpinEnsemble::new(4, 4, 1.0).unwrap();
    let (pre, post) = brute_force_distributions(&sys, BranchRule::Counting).unwrap();
    assert_eq!(pre.entries.len(), 1);
    assert_eq!(pre.entries[0].m, 2);
    assert!(post.probability(2).unwrap().is_one());
}

#[test]
fn enumeration_at_twelve_spins() {
    let sys = SpinEnsemble::new(12, 5, 1.0).unwrap();
    let (pre, post) = brute_force_distributions(&sys, BranchRule::Counting).unwrap();
    assert!(pre.same_probabilities(&post));
}

#[test]
fn outcome_temperatures_use_the_half() {
    let sys = SpinEnsemble::new(8, 3, 1.0).unwrap();
    let pre = pre_measurement_distribution(&sys, 4).unwrap();
    assert_eq!(pre.entries[0].temperature, None);
    assert_eq!(pre.entries[2].temperature, Some(SpinTemperature::PositiveInfinity));
    let t1 = pre.entries[1].temperature.unwrap().finite().unwrap();
    assert!((t1 - 1.0 / 3f64.ln()).abs() < 1e-15);
}

#[test]
fn excited_shift_asymptotics_improve_with_size() {
    let rel = |two_n, m| {
        let s = temperature_shifts(two_n, m, 1.0).unwrap();
        let ground = ((s.ground_asymptotic - s.ground_exact) / s.ground_exact).abs();
        let excited = ((s.excited_asymptotic - s.excited_exact) / s.excited_exact).abs();
        (ground, excited)
    };
    let sizes = [(100, 10), (1000, 100), (10_000, 1000)];
    let errors: Vec<(f64, f64)> = sizes.iter().map(|&(a, b)| rel(a, b)).collect();
    assert!(errors.windows(2).all(|w| w[1].1 < w[0].1), "{errors:?}");

    // at fixed 2N/M the ground-branch error settles to a nonzero limit
    // rather than shrinking; its increments must contract
    let d1 = (errors[1].0 - errors[0].0).abs();
    let d2 = (errors[2].0 - errors[1].0).abs();
    assert!(d2 < 0.2 * d1, "{errors:?}");
}

#[test]
fn microcanonical_matches_canonical_inversion() {
    // μB = 1 so α = 2μB/k_B = 2
    for two_n in (2..=40).step_by(2) {
        let map = TemperatureMap::new(EnergySpectrum::spin_composite(two_n as u32, 1.0).unwrap()).unwrap();
        for m in 1..two_n / 2 {
            let micro = SpinEnsemble::new(two_n, m, 2.0).unwrap().temperature().unwrap();
            let micro = micro.finite().unwrap();
            let energy = 2.0 * m as f64 - two_n as f64;
            let canonical = map.temperature(energy).unwrap();
            assert!(
                ((canonical - micro) / micro).abs() < 1e-10,
                "2N={two_n} M={m}: {canonical} vs {micro}"
            );
        }
    }
}
