//! The 2N-spin thermal EPR system.
//!
//! `2N` two-level spins (energies ±μB) share `M` excitations in a
//! microcanonical state. The system is split into two halves of `N` spins.
//! A projective measurement of one spin in the first half collapses the state
//! onto the branch where that spin is unexcited or excited. The functions
//! here give the exact statistics of a later temperature measurement on the
//! second half, before and after that collapse.
//!
//! The random a-priori phases of the microcanonical state drop out of every
//! probability computed here, so they are not represented.

mod approx;
mod enumerate;
mod exact;

pub use approx::{ln_binomial, post_measurement_probabilities, pre_measurement_probabilities};
pub use enumerate::{brute_force_distributions, ENUMERATION_LIMIT};
pub use exact::{
    binomial, branch_weights, no_signaling_report, post_measurement_distribution,
    pre_measurement_distribution, BranchRule, BranchWeights, DistributionLabel,
    format_rational, rational_to_f64, NoSignalingReport, OutcomeEntry, SubsystemOutcomeDistribution,
};

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpinError {
    #[error("total spin count must be positive and even, got {0}")]
    OddOrEmpty(u64),
    #[error("excited count {excited} exceeds the {spins} spins")]
    TooManyExcited { spins: u64, excited: u64 },
    #[error("alpha must be positive and finite")]
    InvalidAlpha,
    #[error("temperature is undefined with {excited} of {spins} spins excited")]
    UndefinedTemperature { spins: u64, excited: u64 },
    #[error("temperature shifts need 1 < M < N, got M = {excited} with N = {half}")]
    ShiftRegime { excited: u64, half: u64 },
    #[error("only the equal split N|N is supported (N = {half}, requested {requested})")]
    UnequalSplit { half: u64, requested: u64 },
    #[error("enumerating {states} microstates exceeds the limit of {limit}")]
    EnumerationTooLarge { states: u128, limit: u128 },
}

/// `2N` spins with `M` excitations; `alpha = 2μB/k_B` is the temperature unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpinEnsemble {
    two_n: u64,
    excited: u64,
    alpha: f64,
}

impl SpinEnsemble {
    pub fn new(two_n: u64, excited: u64, alpha: f64) -> Result<Self, SpinError> {
        if two_n == 0 || two_n % 2 != 0 {
            return Err(SpinError::OddOrEmpty(two_n));
        }
        if excited > two_n {
            return Err(SpinError::TooManyExcited {
                spins: two_n,
                excited,
            });
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(SpinError::InvalidAlpha);
        }
        Ok(SpinEnsemble {
            two_n,
            excited,
            alpha,
        })
    }

    pub fn two_n(&self) -> u64 {
        self.two_n
    }

    pub fn half(&self) -> u64 {
        self.two_n / 2
    }

    pub fn excited(&self) -> u64 {
        self.excited
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Range of excitations the second half can hold.
    pub fn subsystem_range(&self) -> std::ops::RangeInclusive<u64> {
        let n = self.half();
        self.excited.saturating_sub(n)..=self.excited.min(n)
    }

    pub fn temperature(&self) -> Result<SpinTemperature, SpinError> {
        microcanonical_temperature(self.two_n, self.excited, self.alpha)
    }
}

/// A spin-system temperature. The infinities are kept as markers and order
/// above and below every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinTemperature {
    Finite(f64),
    PositiveInfinity,
    NegativeInfinity,
}

impl SpinTemperature {
    pub fn finite(self) -> Option<f64> {
        match self {
            SpinTemperature::Finite(t) => Some(t),
            _ => None,
        }
    }

    fn rank(self) -> (i8, f64) {
        match self {
            SpinTemperature::NegativeInfinity => (-1, 0.0),
            SpinTemperature::Finite(t) => (0, t),
            SpinTemperature::PositiveInfinity => (1, 0.0),
        }
    }
}

impl PartialOrd for SpinTemperature {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let (a, x) = self.rank();
        let (b, y) = other.rank();
        Some(a.cmp(&b).then(x.total_cmp(&y)))
    }
}

impl fmt::Display for SpinTemperature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpinTemperature::Finite(t) => write!(f, "{t}"),
            SpinTemperature::PositiveInfinity => f.write_str("inf"),
            SpinTemperature::NegativeInfinity => f.write_str("-inf"),
        }
    }
}

/// `T = α / ln(spins/excited − 1)` for a block of two-level spins.
///
/// Half filling gives [`SpinTemperature::PositiveInfinity`]; more than half
/// filling gives a negative temperature. An empty or fully excited block has
/// no temperature.
pub fn microcanonical_temperature(
    spins: u64,
    excited: u64,
    alpha: f64,
) -> Result<SpinTemperature, SpinError> {
    if excited > spins {
        return Err(SpinError::TooManyExcited { spins, excited });
    }
    if excited == 0 || excited == spins {
        return Err(SpinError::UndefinedTemperature { spins, excited });
    }
    if 2 * excited == spins {
        return Ok(SpinTemperature::PositiveInfinity);
    }
    let log = ((spins - excited) as f64 / excited as f64).ln();
    Ok(SpinTemperature::Finite(alpha / log))
}

/// Temperature change of the remaining `2N − 1` spins after one spin is
/// found unexcited (`ground`) or excited (`excited`), exact and in the
/// `2N ≫ M ≫ 1` asymptotic form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TemperatureShifts {
    pub ground_exact: f64,
    pub excited_exact: f64,
    pub ground_asymptotic: f64,
    pub excited_asymptotic: f64,
}

pub fn temperature_shifts(two_n: u64, excited: u64, alpha: f64) -> Result<TemperatureShifts, SpinError> {
    let ens = SpinEnsemble::new(two_n, excited, alpha)?;
    let half = ens.half();
    if !(1 < excited && excited < half) {
        return Err(SpinError::ShiftRegime { excited, half });
    }
    let t = |s, m| {
        microcanonical_temperature(s, m, alpha).map(|t| t.finite().expect("finite below half filling"))
    };
    let before = t(two_n, excited)?;
    let log2 = (two_n as f64 / excited as f64).ln().powi(2);
    Ok(TemperatureShifts {
        ground_exact: t(two_n - 1, excited)? - before,
        excited_exact: t(two_n - 1, excited - 1)? - before,
        ground_asymptotic: alpha / (half as f64 * log2),
        excited_asymptotic: -alpha / (excited as f64 * log2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn temperature_examples() {
        let t = microcanonical_temperature(4, 1, 1.0).unwrap().finite().unwrap();
        assert!((t - 0.910_239_226_626_837_3).abs() < 1e-15);
        assert_eq!(
            microcanonical_temperature(4, 2, 1.0).unwrap(),
            SpinTemperature::PositiveInfinity
        );
        let t = microcanonical_temperature(4, 3, 1.0).unwrap().finite().unwrap();
        assert!((t + 0.910_239_226_626_837_3).abs() < 1e-15);
        for m in [0, 4] {
            assert_eq!(
                microcanonical_temperature(4, m, 1.0),
                Err(SpinError::UndefinedTemperature { spins: 4, excited: m })
            );
        }
    }

    #[test]
    fn marker_ordering() {
        use SpinTemperature::*;
        assert!(PositiveInfinity > Finite(1e300));
        assert!(NegativeInfinity < Finite(-1e300));
        assert!(Finite(-1.0) < Finite(2.0));
        assert!(NegativeInfinity < PositiveInfinity);
    }

    #[test]
    fn shift_examples() {
        let s = temperature_shifts(100, 10, 1.0).unwrap();
        assert!((s.ground_exact - 0.002_326_198_063_954_51).abs() < 1e-15);
        assert!((s.ground_asymptotic - 0.003_772_233_940_232_277).abs() < 1e-15);
        assert!((s.excited_exact + 0.020_825_131_410_166_897).abs() < 1e-15);
        assert!((s.excited_asymptotic + 0.018_861_169_701_161_39).abs() < 1e-15);
    }

    #[test]
    fn shift_preconditions() {
        assert!(matches!(temperature_shifts(100, 1, 1.0), Err(SpinError::ShiftRegime { .. })));
        assert!(matches!(temperature_shifts(100, 50, 1.0), Err(SpinError::ShiftRegime { .. })));
        assert!(matches!(temperature_shifts(101, 10, 1.0), Err(SpinError::OddOrEmpty(101))));
    }

    #[test]
    fn ensemble_validation() {
        assert!(SpinEnsemble::new(0, 0, 1.0).is_err());
        assert!(SpinEnsemble::new(4, 5, 1.0).is_err());
        assert!(SpinEnsemble::new(4, 1, 0.0).is_err());
        let e = SpinEnsemble::new(6, 5, 2.0).unwrap();
        assert_eq!(e.subsystem_range(), 2..=3);
    }
}
