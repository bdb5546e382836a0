//! Discrete spectra and their canonical averages.
//!
//! All Boltzmann sums are evaluated with energies measured from a reference
//! level (the ground state for positive temperature, the top level for the
//! negative branch), so every exponent is non-positive.

mod file;
mod map;

pub use file::{parse_spectrum, read_spectrum_file, SpectrumDocument};
pub use map::{EigenPair, MappedTemperature, TemperatureEigensystem, TemperatureMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::root::RootError;
use crate::units::UnitSystem;

// Largest argument for which exp() is finite.
const MAX_EXP_ARG: f64 = 709.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("spectrum has no levels")]
    Empty,
    #[error("level {index}: energy {energy:e} is not strictly above the previous level {previous:e}")]
    NotIncreasing {
        index: usize,
        energy: f64,
        previous: f64,
    },
    #[error("level {index}: degeneracy must be at least 1")]
    ZeroDegeneracy { index: usize },
    #[error("level {index}: energy is not finite")]
    NonFiniteEnergy { index: usize },
    #[error("a temperature map needs at least two distinct levels")]
    TooFewLevels,
    #[error("temperature must be positive and finite, got {0}")]
    InvalidTemperature(f64),
    #[error("Boltzmann exponent {argument:e} exceeds the safe range")]
    Overflow { argument: f64 },
    #[error("energy {energy:e} is at or below the ground state {ground:e}")]
    BelowGroundState { energy: f64, ground: f64 },
    #[error("energy {energy:e} is at or above infinite-temperature mean {mean:e}")]
    AboveInfiniteTemperatureMean { energy: f64, mean: f64 },
    #[error("energy {energy:e} is at or above the highest level {top:e}")]
    AboveHighestLevel { energy: f64, top: f64 },
    #[error("binomial degeneracy C({n}, {k}) does not fit in 64 bits")]
    DegeneracyOverflow { n: u32, k: u32 },
    #[error("inverting the mean energy failed: {0}")]
    Inversion(#[from] RootError),
    #[error("{0}")]
    Parse(String),
}

/// One energy level with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub energy: f64,
    pub degeneracy: u64,
}

impl Level {
    pub fn new(energy: f64, degeneracy: u64) -> Self {
        Level { energy, degeneracy }
    }
}

/// A finite Hamiltonian spectrum with strictly increasing energies.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySpectrum {
    levels: Vec<Level>,
    units: UnitSystem,
}

impl EnergySpectrum {
    pub fn new(levels: Vec<Level>, units: UnitSystem) -> Result<Self, SpectrumError> {
        if levels.is_empty() {
            return Err(SpectrumError::Empty);
        }
        for (index, level) in levels.iter().enumerate() {
            if !level.energy.is_finite() {
                return Err(SpectrumError::NonFiniteEnergy { index });
            }
            if level.degeneracy == 0 {
                return Err(SpectrumError::ZeroDegeneracy { index });
            }
            if index > 0 && level.energy <= levels[index - 1].energy {
                return Err(SpectrumError::NotIncreasing {
                    index,
                    energy: level.energy,
                    previous: levels[index - 1].energy,
                });
            }
        }
        Ok(EnergySpectrum { levels, units })
    }

    /// Dimensionless spectrum from `(energy, degeneracy)` pairs.
    pub fn from_pairs(pairs: &[(f64, u64)]) -> Result<Self, SpectrumError> {
        Self::new(
            pairs.iter().map(|&(e, g)| Level::new(e, g)).collect(),
            UnitSystem::Dimensionless,
        )
    }

    /// The total-energy spectrum of `spins` independent two-level spins with
    /// single-spin energies `±mu_b`: level `(2k − spins)·mu_b` has degeneracy
    /// `C(spins, k)` for `k` excited spins.
    pub fn spin_composite(spins: u32, mu_b: f64) -> Result<Self, SpectrumError> {
        let levels = (0..=spins)
            .map(|k| {
                let g = binomial_u64(spins, k).ok_or(SpectrumError::DegeneracyOverflow { n: spins, k })?;
                Ok(Level::new((2.0 * k as f64 - spins as f64) * mu_b, g))
            })
            .collect::<Result<Vec<_>, SpectrumError>>()?;
        Self::new(levels, UnitSystem::Dimensionless)
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn units(&self) -> UnitSystem {
        self.units
    }

    pub fn ground_energy(&self) -> f64 {
        self.levels[0].energy
    }

    pub fn top_energy(&self) -> f64 {
        self.levels[self.levels.len() - 1].energy
    }

    pub fn state_count(&self) -> f64 {
        self.levels.iter().map(|l| l.degeneracy as f64).sum()
    }

    /// Degeneracy-weighted mean of all levels, the τ → ∞ limit of the mean energy.
    pub fn infinite_temperature_mean(&self) -> f64 {
        let e0 = self.ground_energy();
        let total = self.state_count();
        e0 + self
            .levels
            .iter()
            .map(|l| l.degeneracy as f64 * (l.energy - e0))
            .sum::<f64>()
            / total
    }

    fn boltzmann_constant(&self) -> f64 {
        self.units.constants().boltzmann
    }

    fn inverse_temperature(&self, tau: f64) -> Result<f64, SpectrumError> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(SpectrumError::InvalidTemperature(tau));
        }
        Ok(1.0 / (self.boltzmann_constant() * tau))
    }

    /// Shifted sums `(Σ g e^{−β(E−E_ref)}, Σ g (E−E_ref) e^{−β(E−E_ref)}, E_ref)`,
    /// with the reference chosen so no exponent is positive.
    fn shifted_sums(&self, beta: f64) -> Result<(f64, f64, f64), SpectrumError> {
        let reference = if beta >= 0.0 {
            self.ground_energy()
        } else {
            self.top_energy()
        };
        let mut z = 0.0;
        let mut first = 0.0;
        for level in &self.levels {
            let de = level.energy - reference;
            let argument = -beta * de;
            if argument > MAX_EXP_ARG || argument.is_nan() {
                return Err(SpectrumError::Overflow { argument });
            }
            let w = level.degeneracy as f64 * argument.exp();
            z += w;
            first += w * de;
        }
        Ok((z, first, reference))
    }

    /// `Z = Σ g_n e^{−E_n / k_B τ}`.
    ///
    /// Returns an overflow error when the ground-state factor `e^{−E_0/k_B τ}`
    /// itself is out of range; [`Self::ln_partition_function`] never overflows.
    pub fn partition_function(&self, tau: f64) -> Result<f64, SpectrumError> {
        let beta = self.inverse_temperature(tau)?;
        let (z, _, e0) = self.shifted_sums(beta)?;
        let argument = -beta * e0;
        if argument > MAX_EXP_ARG {
            return Err(SpectrumError::Overflow { argument });
        }
        Ok(z * argument.exp())
    }

    pub fn ln_partition_function(&self, tau: f64) -> Result<f64, SpectrumError> {
        let beta = self.inverse_temperature(tau)?;
        let (z, _, e0) = self.shifted_sums(beta)?;
        Ok(z.ln() - beta * e0)
    }

    /// Canonical mean energy at temperature `tau > 0`.
    pub fn mean_energy(&self, tau: f64) -> Result<f64, SpectrumError> {
        let beta = self.inverse_temperature(tau)?;
        self.mean_energy_at_beta(beta)
    }

    /// Mean energy at any finite inverse temperature `β = 1/k_B τ`,
    /// including β ≤ 0 (infinite or negative temperature).
    pub(crate) fn mean_energy_at_beta(&self, beta: f64) -> Result<f64, SpectrumError> {
        let (z, first, reference) = self.shifted_sums(beta)?;
        Ok(reference + first / z)
    }

    /// Mean energy on the negative-temperature branch, `tau < 0`.
    pub fn mean_energy_negative(&self, tau: f64) -> Result<f64, SpectrumError> {
        if !(tau < 0.0 && tau.is_finite()) {
            return Err(SpectrumError::InvalidTemperature(tau));
        }
        self.mean_energy_at_beta(1.0 / (self.boltzmann_constant() * tau))
    }
}

/// `C(n, k)` if it fits in a `u64`.
pub(crate) fn binomial_u64(n: u32, k: u32) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc·(n−i)/(i+1) = C(n, i+1)
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    u64::try_from(acc).ok()
}
