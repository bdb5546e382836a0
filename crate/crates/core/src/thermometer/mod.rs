//! The position thermometer: `N` harmonic oscillators in equilibrium with a
//! system at temperature `T_S`, read out through `Y = (1/N) Σ x_i²`.
//!
//! Everything is expressed through `θ = ħω / (2 k_B T)` and the ground-state
//! variance `g = ħ/(2mω)`. The equilibrium variance is `σ² = g coth θ_S`, and
//! the calibration curve inverts it: `T = ħω / (2 k_B arcoth(Y/g))`.

mod appendix;
mod readout;
mod sample;

pub use appendix::{
    eigenfunction_sum_oracle, required_truncation, thermal_position_density,
    ThermalPositionDensity, ORACLE_TAIL_BOUND,
};
pub use readout::{temperature_density, ReadoutDistribution};
pub use sample::{sample_readouts, SampleReport, Shot, SHARD_SHOTS};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::distribution::{Continuous, ContinuousCDF, Gamma};
use statrs::function::erf::erfc;
use thiserror::Error;

use crate::quad::QuadError;
use crate::special::{arcoth_from_ln_excess, coth_excess, ln_coth_excess};
use crate::units::UnitSystem;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThermometerError {
    #[error("{name} must be positive and finite, got {value:e}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("oscillator count must be at least 1")]
    NoOscillators,
    #[error("system temperature must be positive and finite, got {0:e}")]
    InvalidTemperature(f64),
    #[error("reading {reading:e} is at or below the ground-state variance {ground:e}; outside the calibration domain")]
    SubGroundStateReading { reading: f64, ground: f64 },
    #[error("shot count must be at least 1")]
    NoShots,
    #[error("truncation {truncation} leaves a tail bound above {bound:e}; need at least {required}")]
    TruncationInsufficient {
        truncation: usize,
        required: usize,
        bound: f64,
    },
    #[error("readout quadrature failed: {0}")]
    Quadrature(#[from] QuadError),
}

/// How a figure-style frequency in THz is turned into ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrequencyConvention {
    /// The number is ω itself in units of 10¹² rad/s.
    #[default]
    Angular,
    /// The number is ν in 10¹² Hz, and ω = 2πν.
    Ordinary,
}

/// Statistical model for the readout `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReadoutModel {
    /// Central-limit Gaussian, mean σ² and variance 2σ⁴/N. Puts some mass
    /// below the ground-state variance.
    #[default]
    Clt,
    /// The exact law of a mean of N squared centred Gaussians: gamma with
    /// shape N/2 and scale 2σ²/N.
    Gamma,
}

/// A system temperature `T_S > 0` (kelvin in SI mode).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct SystemTemperature(f64);

impl SystemTemperature {
    pub fn new(value: f64) -> Result<Self, ThermometerError> {
        if value > 0.0 && value.is_finite() {
            Ok(SystemTemperature(value))
        } else {
            Err(ThermometerError::InvalidTemperature(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// A mean-square position reading, stored as the ground-state variance and
/// the log of the relative excess above it: `Y = g (1 + e^L)`.
///
/// Near zero temperature the excess is far below one ulp of `g`; keeping it
/// separately lets [`OscillatorThermometer::calibrate`] invert the equilibrium
/// variance exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanSquare {
    ground: f64,
    ln_excess: f64,
}

impl MeanSquare {
    /// Wraps a raw reading `y`; values at or below `ground` are kept and
    /// rejected later by calibration.
    pub fn from_value(y: f64, ground: f64) -> Self {
        let excess = (y - ground) / ground;
        let ln_excess = if excess > 0.0 { excess.ln() } else { f64::NAN };
        MeanSquare { ground, ln_excess }
    }

    pub fn value(&self) -> f64 {
        self.ground * (1.0 + self.ln_excess.exp())
    }

    /// `(Y − g) / g`.
    pub fn excess_ratio(&self) -> f64 {
        self.ln_excess.exp()
    }

    pub fn ln_excess_ratio(&self) -> f64 {
        self.ln_excess
    }

    pub fn ground(&self) -> f64 {
        self.ground
    }
}

/// `N` identical oscillators of angular frequency `omega` and mass `mass`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillatorThermometer {
    omega: f64,
    mass: f64,
    count: u64,
    units: UnitSystem,
}

fn positive(name: &'static str, value: f64) -> Result<f64, ThermometerError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(ThermometerError::InvalidParameter { name, value })
    }
}

impl OscillatorThermometer {
    pub fn new(omega: f64, mass: f64, count: u64, units: UnitSystem) -> Result<Self, ThermometerError> {
        if count == 0 {
            return Err(ThermometerError::NoOscillators);
        }
        Ok(OscillatorThermometer {
            omega: positive("omega", omega)?,
            mass: positive("mass", mass)?,
            count,
            units,
        })
    }

    /// ħ = m = k_B = 1 conventions with the given ω.
    pub fn natural(omega: f64, mass: f64, count: u64) -> Result<Self, ThermometerError> {
        Self::new(omega, mass, count, UnitSystem::Dimensionless)
    }

    /// SI thermometer from a frequency in THz and a mass in atomic mass units.
    pub fn from_thz_amu(
        thz: f64,
        mass_amu: f64,
        count: u64,
        convention: FrequencyConvention,
    ) -> Result<Self, ThermometerError> {
        let thz = positive("omega", thz)?;
        let omega = match convention {
            FrequencyConvention::Angular => thz * 1e12,
            FrequencyConvention::Ordinary => 2.0 * PI * thz * 1e12,
        };
        let amu = UnitSystem::Si.constants().atomic_mass_unit;
        Self::new(omega, positive("mass", mass_amu)? * amu, count, UnitSystem::Si)
    }

    pub fn with_count(mut self, count: u64) -> Result<Self, ThermometerError> {
        if count == 0 {
            return Err(ThermometerError::NoOscillators);
        }
        self.count = count;
        Ok(self)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn units(&self) -> UnitSystem {
        self.units
    }

    fn hbar(&self) -> f64 {
        self.units.constants().hbar
    }

    fn boltzmann(&self) -> f64 {
        self.units.constants().boltzmann
    }

    /// `ħ/(2mω)`, the zero-temperature variance and the calibration threshold.
    pub fn ground_variance(&self) -> f64 {
        self.hbar() / (2.0 * self.mass * self.omega)
    }

    /// `ħω / 2k_B`, the temperature at which θ = 1.
    pub fn theta_scale(&self) -> f64 {
        self.hbar() * self.omega / (2.0 * self.boltzmann())
    }

    pub fn theta(&self, t: SystemTemperature) -> f64 {
        self.theta_scale() / t.value()
    }

    /// The temperature at which the thermometer sits at the given θ.
    pub fn temperature_at_theta(&self, theta: f64) -> Result<SystemTemperature, ThermometerError> {
        SystemTemperature::new(self.theta_scale() / theta)
    }

    /// `σ² = (ħ/2mω) coth(ħω / 2k_B T_S)`.
    pub fn position_variance(&self, t: SystemTemperature) -> MeanSquare {
        MeanSquare {
            ground: self.ground_variance(),
            ln_excess: ln_coth_excess(self.theta(t)),
        }
    }

    pub fn position_variance_value(&self, t: SystemTemperature) -> f64 {
        self.ground_variance() * (1.0 + coth_excess(self.theta(t)))
    }

    /// Calibration curve `T = (ħω/2k_B) / arcoth(2mωY/ħ)`.
    pub fn calibrate(&self, y: &MeanSquare) -> Result<f64, ThermometerError> {
        if y.ln_excess.is_nan() || y.ln_excess == f64::NEG_INFINITY {
            return Err(ThermometerError::SubGroundStateReading {
                reading: y.value(),
                ground: y.ground,
            });
        }
        Ok(self.theta_scale() / arcoth_from_ln_excess(y.ln_excess))
    }

    pub fn calibrate_value(&self, y: f64) -> Result<f64, ThermometerError> {
        let ground = self.ground_variance();
        if y.is_nan() || y <= ground {
            return Err(ThermometerError::SubGroundStateReading { reading: y, ground });
        }
        self.calibrate(&MeanSquare::from_value(y, ground))
    }

    /// Law of `y = x²` for one oscillator.
    pub fn single_y_density(&self, t: SystemTemperature) -> SquaredPosition {
        SquaredPosition {
            sigma2: self.position_variance_value(t),
        }
    }

    /// Law of `Y = (1/N) Σ x_i²` under the chosen model.
    pub fn many_body_y_density(&self, t: SystemTemperature, model: ReadoutModel) -> MeanSquareLaw {
        let excess = coth_excess(self.theta(t));
        MeanSquareLaw::new(self.ground_variance(), excess, self.count, model)
    }
}

/// `P(y) = exp(−y/2σ²) / (σ √(2πy))` for `y > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquaredPosition {
    pub sigma2: f64,
}

impl SquaredPosition {
    pub fn pdf(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        (-y / (2.0 * self.sigma2)).exp() / (self.sigma2.sqrt() * (2.0 * PI * y).sqrt())
    }

    pub fn mean(&self) -> f64 {
        self.sigma2
    }

    pub fn variance(&self) -> f64 {
        2.0 * self.sigma2 * self.sigma2
    }
}

/// Distribution of the many-body reading `Y`, parametrised by the excess
/// `e = (Y − g)/g` so the region just above the threshold stays resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanSquareLaw {
    ground: f64,
    mean_excess: f64,
    count: u64,
    model: ReadoutModel,
    gamma: Option<Gamma>,
}

impl MeanSquareLaw {
    fn new(ground: f64, mean_excess: f64, count: u64, model: ReadoutModel) -> Self {
        let gamma = match model {
            ReadoutModel::Clt => None,
            ReadoutModel::Gamma => {
                let shape = count as f64 / 2.0;
                // in units of g: mean (1 + e_S), scale 2(1 + e_S)/N
                let rate = count as f64 / (2.0 * (1.0 + mean_excess));
                Some(Gamma::new(shape, rate).expect("positive gamma parameters"))
            }
        };
        MeanSquareLaw {
            ground,
            mean_excess,
            count,
            model,
            gamma,
        }
    }

    pub fn model(&self) -> ReadoutModel {
        self.model
    }

    pub fn mean(&self) -> f64 {
        self.ground * (1.0 + self.mean_excess)
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        2.0 * m * m / self.count as f64
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }

    pub(crate) fn mean_excess(&self) -> f64 {
        self.mean_excess
    }

    /// Standard deviation of `Y/g`.
    pub(crate) fn excess_std(&self) -> f64 {
        (1.0 + self.mean_excess) * (2.0 / self.count as f64).sqrt()
    }

    /// Density of `Y/g` at excess `e`, i.e. at `Y/g = 1 + e`.
    pub(crate) fn pdf_excess(&self, e: f64) -> f64 {
        match &self.gamma {
            None => {
                let s = self.excess_std();
                let z = (e - self.mean_excess) / s;
                (-0.5 * z * z).exp() / (s * (2.0 * PI).sqrt())
            }
            Some(g) => {
                let u = 1.0 + e;
                if u <= 0.0 {
                    0.0
                } else {
                    g.ln_pdf(u).exp()
                }
            }
        }
    }

    /// `P(Y/g ≤ 1 + e)`.
    pub(crate) fn cdf_excess(&self, e: f64) -> f64 {
        match &self.gamma {
            None => {
                let z = (e - self.mean_excess) / self.excess_std();
                0.5 * erfc(-z / std::f64::consts::SQRT_2)
            }
            Some(g) => g.cdf(1.0 + e),
        }
    }

    /// `P(Y/g > 1 + e)`.
    pub(crate) fn sf_excess(&self, e: f64) -> f64 {
        match &self.gamma {
            None => {
                let z = (e - self.mean_excess) / self.excess_std();
                0.5 * erfc(z / std::f64::consts::SQRT_2)
            }
            Some(g) => g.sf(1.0 + e),
        }
    }

    pub fn pdf(&self, y: f64) -> f64 {
        self.pdf_excess(y / self.ground - 1.0) / self.ground
    }

    pub fn cdf(&self, y: f64) -> f64 {
        self.cdf_excess(y / self.ground - 1.0)
    }

    /// Probability that the reading falls at or below the ground-state
    /// variance, where calibration is undefined.
    pub fn mass_below_threshold(&self) -> f64 {
        self.cdf_excess(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> OscillatorThermometer {
        OscillatorThermometer::natural(1.0, 1.0, 1).unwrap()
    }

    fn ts(v: f64) -> SystemTemperature {
        SystemTemperature::new(v).unwrap()
    }

    #[test]
    fn variance_examples() {
        let th = unit();
        // θ = 1/(2·0.5) = 1  ⇒  ½ coth 1
        let v = th.position_variance(ts(0.5)).value();
        assert!((v - 0.656_517_642_749_665_7).abs() < 1e-15);
        assert_eq!(th.position_variance(ts(1e-6)).value(), 0.5);
        // classical limit k_B T/(mω²)
        let t = 1e6;
        assert!((th.position_variance(ts(t)).value() / t - 1.0).abs() < 1e-12);
    }

    #[test]
    fn calibration_inverts_variance() {
        let th = OscillatorThermometer::natural(2.5, 0.3, 10).unwrap();
        for &t in &[1e-4, 0.01, 0.7, 3.0, 1e5] {
            let back = th.calibrate(&th.position_variance(ts(t))).unwrap();
            assert!((back - t).abs() / t < 1e-13, "{t} -> {back}");
            let raw = th.calibrate_value(th.position_variance_value(ts(t)));
            if t > 0.2 {
                assert!((raw.unwrap() - t).abs() / t < 1e-12);
            }
        }
    }

    #[test]
    fn calibration_domain() {
        let th = unit();
        assert!(matches!(
            th.calibrate_value(0.5),
            Err(ThermometerError::SubGroundStateReading { .. })
        ));
        assert!(th.calibrate_value(0.4).is_err());
        let t = th.calibrate_value(0.5 * (1.0 + 1e-12)).unwrap();
        assert!(t > 0.0 && t < 0.04);
    }

    #[test]
    fn squared_position_moments() {
        let d = unit().single_y_density(ts(0.5));
        let s2 = d.sigma2;
        assert_eq!(d.mean(), s2);
        assert_eq!(d.variance(), 2.0 * s2 * s2);
        assert_eq!(d.pdf(-1.0), 0.0);
    }

    #[test]
    fn parameter_validation() {
        assert!(OscillatorThermometer::natural(0.0, 1.0, 1).is_err());
        assert!(OscillatorThermometer::natural(1.0, -1.0, 1).is_err());
        assert_eq!(
            OscillatorThermometer::natural(1.0, 1.0, 0),
            Err(ThermometerError::NoOscillators)
        );
        assert!(SystemTemperature::new(0.0).is_err());
        assert!(SystemTemperature::new(f64::INFINITY).is_err());
    }

    #[test]
    fn fig2_units() {
        let a = OscillatorThermometer::from_thz_amu(1.0, 6.0, 10, FrequencyConvention::Angular).unwrap();
        let o = OscillatorThermometer::from_thz_amu(1.0, 6.0, 10, FrequencyConvention::Ordinary).unwrap();
        assert_eq!(a.omega(), 1e12);
        assert!((o.omega() / a.omega() - 2.0 * PI).abs() < 1e-12);
        // ħω/2k_B for ω = 10¹² rad/s is about 3.82 K
        assert!((a.theta_scale() - 3.819).abs() < 1e-3);
    }

    #[test]
    fn many_body_moments() {
        let th = OscillatorThermometer::natural(1.0, 1.0, 50).unwrap();
        for model in [ReadoutModel::Clt, ReadoutModel::Gamma] {
            let law = th.many_body_y_density(ts(0.5), model);
            let s2 = th.position_variance_value(ts(0.5));
            assert!((law.mean() - s2).abs() < 1e-15);
            assert!((law.variance() - 2.0 * s2 * s2 / 50.0).abs() < 1e-15);
            let mid = law.cdf(law.mean());
            assert!(mid > 0.4 && mid < 0.6);
        }
    }
}
