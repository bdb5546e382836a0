//! Temperature as an observable: exact and numerical tools for
//!
//! * discrete spectra and the map between canonical mean energy and
//!   temperature, whose image on the energy eigenvalues defines a temperature
//!   operator ([`spectrum`]);
//! * measurement statistics of a split 2N-spin microcanonical system, where
//!   measuring one spin on one side leaves the temperature statistics of the
//!   other side unchanged ([`spin`]);
//! * a thermometer made of harmonic oscillators read out through their mean
//!   squared position: calibration, readout distributions, Monte Carlo shots,
//!   and the thermal position density ([`thermometer`]).

pub mod error;
pub mod quad;
pub mod root;
pub mod special;
pub mod spectrum;
pub mod spin;
pub mod thermometer;
pub mod units;

pub use error::{Error, ErrorClass, Result};
pub use spectrum::{
    EnergySpectrum, Level, MappedTemperature, SpectrumError, TemperatureEigensystem, TemperatureMap,
};
pub use spin::{
    BranchRule, BranchWeights, SpinEnsemble, SpinError, SpinTemperature, SubsystemOutcomeDistribution,
    TemperatureShifts,
};
pub use thermometer::{
    FrequencyConvention, MeanSquare, OscillatorThermometer, ReadoutDistribution, ReadoutModel,
    SampleReport, SystemTemperature, ThermometerError,
};
pub use units::{Constants, UnitSystem};

/// Crate version, echoed in emitted documents.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
