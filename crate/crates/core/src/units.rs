//! Unit conventions and the physical constants table.
//!
//! Every SI-mode number in the crate goes through [`Constants`], so a single
//! table pins the CODATA values used for a run.

use serde::{Deserialize, Serialize};

/// Reduced Planck constant, J s (CODATA 2018, exact).
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K (CODATA 2018, exact).
pub const BOLTZMANN_SI: f64 = 1.380_649e-23;
/// Unified atomic mass unit, kg (CODATA 2018).
pub const ATOMIC_MASS_UNIT_SI: f64 = 1.660_539_066_60e-27;

/// Which unit convention a spectrum or thermometer is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitSystem {
    /// ħ = k_B = 1; energies and temperatures share one unit.
    #[default]
    #[serde(alias = "natural")]
    Dimensionless,
    /// Joules, kelvin, kilograms, rad/s.
    Si,
}

impl UnitSystem {
    pub fn constants(self) -> Constants {
        match self {
            UnitSystem::Dimensionless => Constants {
                hbar: 1.0,
                boltzmann: 1.0,
                atomic_mass_unit: 1.0,
            },
            UnitSystem::Si => Constants {
                hbar: HBAR_SI,
                boltzmann: BOLTZMANN_SI,
                atomic_mass_unit: ATOMIC_MASS_UNIT_SI,
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            UnitSystem::Dimensionless => "dimensionless",
            UnitSystem::Si => "si",
        }
    }
}

/// The constants in effect for one unit system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    pub hbar: f64,
    pub boltzmann: f64,
    pub atomic_mass_unit: f64,
}
