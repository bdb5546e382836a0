//! Floating-point distributions for systems too large for exact rationals.
//!
//! Each probability is `exp` of a sum of log-binomials. `ln C(n, k)` is taken
//! from log-factorials, which are tabulated exactly up to 170 and use a
//! Stirling-type approximation with relative error ~1e-15 beyond, so a
//! probability built from four log-binomials carries a relative error of
//! roughly `1e-15 · Σ|ln C|`. That is below 1e-10 for 2N up to 10^5.

use statrs::function::factorial::ln_factorial;

use super::exact::BranchRule;
use super::SpinEnsemble;

/// `ln C(n, k)`, or `-inf` outside `0 ≤ k ≤ n`.
pub fn ln_binomial(n: i64, k: i64) -> f64 {
    if n < 0 || k < 0 || k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n as u64) - ln_factorial(k as u64) - ln_factorial((n - k) as u64)
}

/// `P^I_m` as floats, in the same order as the exact distribution.
pub fn pre_measurement_probabilities(system: &SpinEnsemble) -> Vec<(u64, f64)> {
    let n = system.half() as i64;
    let big_m = system.excited() as i64;
    let ln_total = ln_binomial(2 * n, big_m);
    system
        .subsystem_range()
        .map(|m| {
            let m_i = m as i64;
            (m, (ln_binomial(n, m_i) + ln_binomial(n, big_m - m_i) - ln_total).exp())
        })
        .collect()
}

/// `P^F_m` as floats.
pub fn post_measurement_probabilities(system: &SpinEnsemble, rule: BranchRule) -> Vec<(u64, f64)> {
    let n = system.half() as i64;
    let big_m = system.excited() as i64;
    let two_n = 2.0 * n as f64;
    let (p_ground, p_excited) = match rule {
        BranchRule::Counting => ((two_n - big_m as f64) / two_n, big_m as f64 / two_n),
        BranchRule::PaperLiteral => (big_m as f64 / two_n, (two_n - big_m as f64) / two_n),
    };
    let ln_r_ground = ln_binomial(2 * n - 1, big_m);
    let ln_r_excited = ln_binomial(2 * n - 1, big_m - 1);
    system
        .subsystem_range()
        .map(|m| {
            let m_i = m as i64;
            let ln_c = ln_binomial(n, m_i);
            let mut p = 0.0;
            if ln_r_ground.is_finite() {
                p += p_ground * (ln_c + ln_binomial(n - 1, big_m - m_i) - ln_r_ground).exp();
            }
            if ln_r_excited.is_finite() {
                p += p_excited * (ln_c + ln_binomial(n - 1, big_m - m_i - 1) - ln_r_excited).exp();
            }
            (m, p)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::exact::{
        post_measurement_distribution, pre_measurement_distribution, rational_to_f64,
    };
    use super::*;

    #[test]
    fn matches_exact_at_the_crossover() {
        for (two_n, m) in [(64, 20), (64, 32), (200, 77)] {
            let s = SpinEnsemble::new(two_n, m, 1.0).unwrap();
            let exact = pre_measurement_distribution(&s, s.half()).unwrap();
            let post = post_measurement_distribution(&s, BranchRule::Counting);
            let approx = pre_measurement_probabilities(&s);
            let approx_post = post_measurement_probabilities(&s, BranchRule::Counting);
            for ((e, a), (ep, ap)) in exact.entries.iter().zip(&approx).zip(post.entries.iter().zip(&approx_post)) {
                let x = rational_to_f64(&e.probability);
                let xp = rational_to_f64(&ep.probability);
                if x > 1e-300 {
                    assert!((a.1 - x).abs() <= 1e-11 * x, "{two_n} {m}: {} vs {x}", a.1);
                    assert!((ap.1 - xp).abs() <= 1e-11 * xp);
                }
            }
        }
    }

    #[test]
    fn large_system_normalised() {
        let s = SpinEnsemble::new(20_000, 3_000, 1.0).unwrap();
        let pre: f64 = pre_measurement_probabilities(&s).iter().map(|p| p.1).sum();
        let post: f64 = post_measurement_probabilities(&s, BranchRule::Counting).iter().map(|p| p.1).sum();
        assert!((pre - 1.0).abs() < 1e-9);
        assert!((post - 1.0).abs() < 1e-9);
    }
}
