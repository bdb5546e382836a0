use thiserror::Error;

use crate::root::RootError;
use crate::spectrum::SpectrumError;
use crate::spin::SpinError;
use crate::thermometer::ThermometerError;

/// Any failure from the engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Spin(#[from] SpinError),
    #[error(transparent)]
    Thermometer(#[from] ThermometerError),
}

/// Coarse failure class, used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Input outside an operation's domain or failing validation.
    Domain,
    /// A numerical method (root finding, quadrature) did not converge.
    Numerical,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Spectrum(SpectrumError::Inversion(_)) | Error::Spectrum(SpectrumError::Overflow { .. }) => {
                ErrorClass::Numerical
            }
            Error::Thermometer(ThermometerError::Quadrature(_)) => ErrorClass::Numerical,
            _ => ErrorClass::Domain,
        }
    }
}

impl From<RootError> for Error {
    fn from(e: RootError) -> Self {
        Error::Spectrum(SpectrumError::Inversion(e))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
