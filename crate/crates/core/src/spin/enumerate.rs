//! Distribution of the second half's excitation count by listing every
//! microstate. No binomial formulas are used: each microstate is a bit string
//! with `M` set bits, counted directly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::exact::{BranchRule, DistributionLabel, SubsystemOutcomeDistribution};
use super::{SpinEnsemble, SpinError};

/// Largest microstate count the enumeration will walk.
pub const ENUMERATION_LIMIT: u128 = 10_000_000;

fn state_count(n: u64, k: u64) -> u128 {
    let k = k.min(n - k) as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n as u128 - i) / (i + 1);
        if acc > ENUMERATION_LIMIT * 1000 {
            break;
        }
    }
    acc
}

/// Next larger integer with the same number of set bits (Gosper's hack).
fn next_combination(v: u128) -> u128 {
    let t = v | (v - 1);
    (t + 1) | (((!t & (t + 1)) - 1) >> (v.trailing_zeros() + 1))
}

/// `(P^I, P^F)` by enumeration.
///
/// Spin 0 is the measured spin in the first half (bits `0..N`); the second
/// half is bits `N..2N`. `P^I` counts microstates by how many of the second
/// half's bits are set. For `P^F`, microstates are split by the measured
/// spin, each branch is renormalised by its own count, and the branches are
/// mixed with the weights of `rule` (for [`BranchRule::Counting`] those are
/// the counted branch fractions themselves).
pub fn brute_force_distributions(
    system: &SpinEnsemble,
    rule: BranchRule,
) -> Result<(SubsystemOutcomeDistribution, SubsystemOutcomeDistribution), SpinError> {
    let two_n = system.two_n();
    let big_m = system.excited();
    let half = system.half();
    let states = state_count(two_n, big_m);
    if states > ENUMERATION_LIMIT || two_n > 126 {
        return Err(SpinError::EnumerationTooLarge {
            states,
            limit: ENUMERATION_LIMIT,
        });
    }

    let slots = half as usize + 1;
    let mut all = vec![0u64; slots];
    let mut ground = vec![0u64; slots];
    let mut excited = vec![0u64; slots];
    let second_half_mask: u128 = ((1u128 << two_n) - 1) & !((1u128 << half) - 1);

    let end = 1u128 << two_n;
    let mut v: u128 = if big_m == 0 { 0 } else { (1u128 << big_m) - 1 };
    loop {
        let m = (v & second_half_mask).count_ones() as usize;
        all[m] += 1;
        if v & 1 == 0 {
            ground[m] += 1;
        } else {
            excited[m] += 1;
        }
        if v == 0 {
            break;
        }
        v = next_combination(v);
        if v >= end {
            break;
        }
    }

    let total: u64 = all.iter().sum();
    let r_ground: u64 = ground.iter().sum();
    let r_excited: u64 = excited.iter().sum();
    let q = |a: u64, b: u64| BigRational::new(BigInt::from(a), BigInt::from(b));
    let (p_ground, p_excited) = match rule {
        BranchRule::Counting => (q(r_ground, total), q(r_excited, total)),
        BranchRule::PaperLiteral => (q(big_m, two_n), q(two_n - big_m, two_n)),
    };

    let range = system.subsystem_range();
    let pre = range.clone().map(|m| (m, q(all[m as usize], total)));
    let post = range.map(|m| {
        let mut p = BigRational::zero();
        if r_ground > 0 {
            p += &p_ground * q(ground[m as usize], r_ground);
        }
        if r_excited > 0 {
            p += &p_excited * q(excited[m as usize], r_excited);
        }
        (m, p)
    });
    Ok((
        SubsystemOutcomeDistribution::from_probabilities(system, DistributionLabel::PreMeasurement, pre),
        SubsystemOutcomeDistribution::from_probabilities(system, DistributionLabel::PostMeasurement, post),
    ))
}
