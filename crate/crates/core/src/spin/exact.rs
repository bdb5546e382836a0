use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{microcanonical_temperature, SpinEnsemble, SpinError, SpinTemperature};

/// `C(n, k)`, zero whenever `k < 0`, `k > n`, or `n < 0`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1u8);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// How the two collapse branches are weighted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchRule {
    /// Born-rule weights from microstate counting: the measured spin is
    /// unexcited in `(2N − M)/2N` of the microstates.
    #[default]
    Counting,
    /// The ground/excited labels as printed in the source derivation:
    /// ground weighted `M/2N`, excited `(2N − M)/2N`. Kept for debugging;
    /// with these weights the no-signaling identity fails.
    PaperLiteral,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchWeights {
    #[serde(serialize_with = "ser_rational")]
    pub p_ground: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub p_excited: BigRational,
}

pub fn branch_weights(system: &SpinEnsemble, rule: BranchRule) -> BranchWeights {
    let two_n = BigInt::from(system.two_n());
    let m = BigInt::from(system.excited());
    let unexcited = ratio(&two_n - &m, two_n.clone());
    let excited = ratio(m, two_n);
    match rule {
        BranchRule::Counting => BranchWeights {
            p_ground: unexcited,
            p_excited: excited,
        },
        BranchRule::PaperLiteral => BranchWeights {
            p_ground: excited,
            p_excited: unexcited,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistributionLabel {
    PreMeasurement,
    PostMeasurement,
}

/// Probability of finding `m` excitations, hence temperature `T_{m,N}`, in
/// the second half. `temperature` is `None` when the half is empty or full.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeEntry {
    pub m: u64,
    pub temperature: Option<SpinTemperature>,
    #[serde(serialize_with = "ser_rational")]
    pub probability: BigRational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsystemOutcomeDistribution {
    pub label: DistributionLabel,
    pub entries: Vec<OutcomeEntry>,
}

impl SubsystemOutcomeDistribution {
    pub(crate) fn from_probabilities(
        system: &SpinEnsemble,
        label: DistributionLabel,
        probabilities: impl IntoIterator<Item = (u64, BigRational)>,
    ) -> Self {
        let half = system.half();
        let entries = probabilities
            .into_iter()
            .map(|(m, probability)| OutcomeEntry {
                m,
                temperature: microcanonical_temperature(half, m, system.alpha()).ok(),
                probability,
            })
            .collect();
        SubsystemOutcomeDistribution { label, entries }
    }

    pub fn total(&self) -> BigRational {
        self.entries
            .iter()
            .fold(BigRational::zero(), |acc, e| acc + &e.probability)
    }

    pub fn probability(&self, m: u64) -> Option<&BigRational> {
        self.entries.iter().find(|e| e.m == m).map(|e| &e.probability)
    }

    /// Largest `|p − q|` over the union of outcomes; missing entries count as 0.
    pub fn max_deviation(&self, other: &Self) -> BigRational {
        let zero = BigRational::zero();
        let ms = self.entries.iter().chain(&other.entries).map(|e| e.m);
        ms.map(|m| {
            let p = self.probability(m).unwrap_or(&zero);
            let q = other.probability(m).unwrap_or(&zero);
            (p - q).abs()
        })
        .max()
        .unwrap_or(zero)
    }

    /// Same outcomes and identical probabilities, ignoring the label.
    pub fn same_probabilities(&self, other: &Self) -> bool {
        self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.m == b.m && a.probability == b.probability)
    }
}

fn check_split(system: &SpinEnsemble, n_sub: u64) -> Result<(), SpinError> {
    if n_sub != system.half() {
        return Err(SpinError::UnequalSplit {
            half: system.half(),
            requested: n_sub,
        });
    }
    Ok(())
}

/// `P^I_m = C(N,m) C(N,M−m) / C(2N,M)`.
pub fn pre_measurement_distribution(
    system: &SpinEnsemble,
    n_sub: u64,
) -> Result<SubsystemOutcomeDistribution, SpinError> {
    check_split(system, n_sub)?;
    let n = system.half() as i64;
    let big_m = system.excited() as i64;
    let total = binomial(2 * n, big_m);
    let probs = system.subsystem_range().map(|m| {
        let m_i = m as i64;
        let w = binomial(n, m_i) * binomial(n, big_m - m_i);
        (m, ratio(w, total.clone()))
    });
    Ok(SubsystemOutcomeDistribution::from_probabilities(
        system,
        DistributionLabel::PreMeasurement,
        probs,
    ))
}

/// Distribution of the second half after one spin of the first half has
/// been measured, mixing the two collapsed branches:
///
/// `P^F_m = p_g C(N,m) C(N−1,M−m)/C(2N−1,M) + p_e C(N,m) C(N−1,M−m−1)/C(2N−1,M−1)`.
///
/// A branch with no microstates contributes nothing.
pub fn post_measurement_distribution(
    system: &SpinEnsemble,
    rule: BranchRule,
) -> SubsystemOutcomeDistribution {
    let n = system.half() as i64;
    let big_m = system.excited() as i64;
    let weights = branch_weights(system, rule);
    let r_ground = binomial(2 * n - 1, big_m);
    let r_excited = binomial(2 * n - 1, big_m - 1);
    let probs = system.subsystem_range().map(|m| {
        let m_i = m as i64;
        let c = binomial(n, m_i);
        let mut p = BigRational::zero();
        if !r_ground.is_zero() {
            p += &weights.p_ground * ratio(&c * binomial(n - 1, big_m - m_i), r_ground.clone());
        }
        if !r_excited.is_zero() {
            p += &weights.p_excited * ratio(&c * binomial(n - 1, big_m - m_i - 1), r_excited.clone());
        }
        (m, p)
    });
    SubsystemOutcomeDistribution::from_probabilities(system, DistributionLabel::PostMeasurement, probs)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoSignalingReport {
    pub holds: bool,
    #[serde(serialize_with = "ser_rational")]
    pub max_deviation: BigRational,
    pub pre: SubsystemOutcomeDistribution,
    pub post: SubsystemOutcomeDistribution,
}

/// Compares the closed-form pre- and post-measurement distributions exactly.
pub fn no_signaling_report(system: &SpinEnsemble, rule: BranchRule) -> NoSignalingReport {
    let pre = pre_measurement_distribution(system, system.half()).expect("equal split");
    let post = post_measurement_distribution(system, rule);
    let max_deviation = pre.max_deviation(&post);
    NoSignalingReport {
        holds: max_deviation.is_zero(),
        max_deviation,
        pre,
        post,
    }
}

/// Renders a rational as `"num/den"`, always with an explicit denominator.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn probs(d: &SubsystemOutcomeDistribution) -> Vec<(u64, BigRational)> {
        d.entries.iter().map(|e| (e.m, e.probability.clone())).collect()
    }

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(0, 0), BigInt::from(1));
        assert_eq!(binomial(3, -1), BigInt::zero());
        assert_eq!(binomial(3, 4), BigInt::zero());
        assert_eq!(binomial(-1, 0), BigInt::zero());
        assert_eq!(binomial(64, 32), BigInt::from(1_832_624_140_942_590_534u64));
    }

    #[test]
    fn pre_examples() {
        let s = SpinEnsemble::new(4, 1, 1.0).unwrap();
        assert_eq!(probs(&pre_measurement_distribution(&s, 2).unwrap()), vec![(0, q(1, 2)), (1, q(1, 2))]);
        let s = SpinEnsemble::new(4, 2, 1.0).unwrap();
        assert_eq!(
            probs(&pre_measurement_distribution(&s, 2).unwrap()),
            vec![(0, q(1, 6)), (1, q(4, 6)), (2, q(1, 6))]
        );
        let s = SpinEnsemble::new(8, 0, 1.0).unwrap();
        assert_eq!(probs(&pre_measurement_distribution(&s, 4).unwrap()), vec![(0, q(1, 1))]);
    }

    #[test]
    fn unequal_split_rejected() {
        let s = SpinEnsemble::new(8, 3, 1.0).unwrap();
        assert_eq!(
            pre_measurement_distribution(&s, 3),
            Err(SpinError::UnequalSplit { half: 4, requested: 3 })
        );
    }

    #[test]
    fn branch_weight_examples() {
        let w = branch_weights(&SpinEnsemble::new(4, 1, 1.0).unwrap(), BranchRule::Counting);
        assert_eq!((w.p_ground, w.p_excited), (q(3, 4), q(1, 4)));
        let w = branch_weights(&SpinEnsemble::new(6, 0, 1.0).unwrap(), BranchRule::Counting);
        assert_eq!(w.p_ground, q(1, 1));
        let w = branch_weights(&SpinEnsemble::new(6, 6, 1.0).unwrap(), BranchRule::Counting);
        assert_eq!(w.p_excited, q(1, 1));
        let w = branch_weights(&SpinEnsemble::new(4, 1, 1.0).unwrap(), BranchRule::PaperLiteral);
        assert_eq!((w.p_ground, w.p_excited), (q(1, 4), q(3, 4)));
    }

    #[test]
    fn post_examples() {
        let s = SpinEnsemble::new(4, 1, 1.0).unwrap();
        let post = post_measurement_distribution(&s, BranchRule::Counting);
        assert_eq!(probs(&post), vec![(0, q(1, 2)), (1, q(1, 2))]);

        let s = SpinEnsemble::new(4, 2, 1.0).unwrap();
        let post = post_measurement_distribution(&s, BranchRule::Counting);
        assert!(post.same_probabilities(&pre_measurement_distribution(&s, 2).unwrap()));

        for m in [0, 6] {
            let s = SpinEnsemble::new(6, m, 1.0).unwrap();
            let post = post_measurement_distribution(&s, BranchRule::Counting);
            assert_eq!(post.total(), q(1, 1));
        }
    }

    #[test]
    fn literal_weights_break_the_identity() {
        let s = SpinEnsemble::new(4, 1, 1.0).unwrap();
        let r = no_signaling_report(&s, BranchRule::PaperLiteral);
        assert!(!r.holds);
        assert_eq!(r.post.probability(0), Some(&q(5, 6)));
        assert_eq!(r.pre.probability(0), Some(&q(1, 2)));
        assert_eq!(r.max_deviation, q(1, 3));
    }

    #[test]
    fn entry_temperatures() {
        let s = SpinEnsemble::new(8, 4, 1.0).unwrap();
        let d = pre_measurement_distribution(&s, 4).unwrap();
        let temps: Vec<_> = d.entries.iter().map(|e| e.temperature).collect();
        assert_eq!(temps[0], None);
        assert_eq!(temps[2], Some(SpinTemperature::PositiveInfinity));
        assert_eq!(temps[4], None);
        assert!(temps[3].unwrap().finite().unwrap() < 0.0);
    }

    #[test]
    fn rational_rendering() {
        assert_eq!(format_rational(&q(2, 4)), "1/2");
        assert_eq!(format_rational(&q(3, 1)), "3/1");
        assert_eq!(rational_to_f64(&q(1, 4)), 0.25);
    }
}
