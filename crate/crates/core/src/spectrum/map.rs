//! The energy ↔ temperature bijection and the temperature operator's
//! eigensystem built from it.

use serde::Serialize;

use super::{EnergySpectrum, SpectrumError};
use crate::root::{Bisection, Monotonicity};

/// Inverts the canonical mean energy of a spectrum.
///
/// Energies in `(E_ground, Ē_∞)` map to positive temperatures. With the
/// negative branch enabled, energies in `(Ē_∞, E_top)` map to negative ones;
/// `Ē_∞` itself (infinite temperature) is always rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct TemperatureMap {
    spectrum: EnergySpectrum,
    solver: Bisection,
    negative_branch: bool,
}

/// A temperature eigenvalue, or a marker for levels the map cannot reach.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MappedTemperature {
    Value(f64),
    OutOfDomain,
}

impl MappedTemperature {
    pub fn value(self) -> Option<f64> {
        match self {
            MappedTemperature::Value(t) => Some(t),
            MappedTemperature::OutOfDomain => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenPair {
    pub energy: f64,
    pub degeneracy: u64,
    pub temperature: MappedTemperature,
}

/// Pairs `(E_n, f(E_n))` for every level of the spectrum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TemperatureEigensystem {
    pub pairs: Vec<EigenPair>,
}

impl TemperatureEigensystem {
    pub fn in_domain(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.pairs
            .iter()
            .filter_map(|p| p.temperature.value().map(|t| (p.energy, t)))
    }
}

impl TemperatureMap {
    pub fn new(spectrum: EnergySpectrum) -> Result<Self, SpectrumError> {
        if spectrum.levels().len() < 2 {
            return Err(SpectrumError::TooFewLevels);
        }
        Ok(TemperatureMap {
            spectrum,
            solver: Bisection::default(),
            negative_branch: false,
        })
    }

    /// Relative convergence threshold for the inverted temperature.
    pub fn with_tolerance(mut self, rel_tol: f64) -> Self {
        self.solver.rel_tol = rel_tol;
        self
    }

    /// Bisection steps allowed after the bracket is found.
    pub fn with_max_iterations(mut self, max_iter: usize) -> Self {
        self.solver.max_iter = max_iter;
        self
    }

    pub fn with_negative_branch(mut self, enabled: bool) -> Self {
        self.negative_branch = enabled;
        self
    }

    pub fn spectrum(&self) -> &EnergySpectrum {
        &self.spectrum
    }

    pub fn tolerance(&self) -> f64 {
        self.solver.rel_tol
    }

    pub fn negative_branch(&self) -> bool {
        self.negative_branch
    }

    /// Open energy interval on which the map is defined.
    pub fn domain(&self) -> (f64, f64) {
        let upper = if self.negative_branch {
            self.spectrum.top_energy()
        } else {
            self.spectrum.infinite_temperature_mean()
        };
        (self.spectrum.ground_energy(), upper)
    }

    /// `f(E)`: the unique temperature whose canonical mean energy is `energy`.
    pub fn temperature(&self, energy: f64) -> Result<f64, SpectrumError> {
        let ground = self.spectrum.ground_energy();
        let mean = self.spectrum.infinite_temperature_mean();
        if energy.is_nan() || energy <= ground {
            return Err(SpectrumError::BelowGroundState { energy, ground });
        }
        if energy < mean {
            return Ok(self
                .solver
                .solve(|t| self.mean_or_nan(t), energy, Monotonicity::Increasing)?);
        }
        if !self.negative_branch || energy == mean {
            return Err(SpectrumError::AboveInfiniteTemperatureMean { energy, mean });
        }
        let top = self.spectrum.top_energy();
        if energy >= top {
            return Err(SpectrumError::AboveHighestLevel { energy, top });
        }
        // s = −τ; the mean falls from E_top towards Ē_∞ as s grows
        let s = self.solver.solve(
            |s| self.spectrum.mean_energy_negative(-s).unwrap_or(f64::NAN),
            energy,
            Monotonicity::Decreasing,
        )?;
        Ok(-s)
    }

    fn mean_or_nan(&self, tau: f64) -> f64 {
        self.spectrum.mean_energy(tau).unwrap_or(f64::NAN)
    }

    /// Maps every level through `f`; levels on or outside the domain
    /// boundary are marked [`MappedTemperature::OutOfDomain`].
    pub fn eigensystem(&self) -> Result<TemperatureEigensystem, SpectrumError> {
        let (lo, hi) = self.domain();
        let pairs = self
            .spectrum
            .levels()
            .iter()
            .map(|level| {
                let temperature = if level.energy > lo && level.energy < hi && level.energy != self.spectrum.infinite_temperature_mean() {
                    MappedTemperature::Value(self.temperature(level.energy)?)
                } else {
                    MappedTemperature::OutOfDomain
                };
                Ok(EigenPair {
                    energy: level.energy,
                    degeneracy: level.degeneracy,
                    temperature,
                })
            })
            .collect::<Result<Vec<_>, SpectrumError>>()?;
        Ok(TemperatureEigensystem { pairs })
    }
}
