//! Thermal position density of one oscillator, in closed form and as a
//! Boltzmann-weighted sum over eigenfunctions.

use std::f64::consts::PI;

use super::{OscillatorThermometer, SystemTemperature, ThermometerError};

/// Largest allowed weight `e^{−λK}` of the discarded eigenfunction tail.
pub const ORACLE_TAIL_BOUND: f64 = 1e-14;

/// `ρ(x) = exp(−x²/ξ²) / (ξ√π)` with `ξ² = (ħ/mω) coth(λ/2)`, `λ = ħω/k_B T_S`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalPositionDensity {
    pub xi: f64,
}

impl ThermalPositionDensity {
    pub fn pdf(&self, x: f64) -> f64 {
        (-(x / self.xi).powi(2)).exp() / (self.xi * PI.sqrt())
    }

    pub fn variance(&self) -> f64 {
        0.5 * self.xi * self.xi
    }
}

pub fn thermal_position_density(th: &OscillatorThermometer, t_s: SystemTemperature) -> ThermalPositionDensity {
    // ξ² = 2σ²
    ThermalPositionDensity {
        xi: (2.0 * th.position_variance_value(t_s)).sqrt(),
    }
}

/// Fewest terms `K` with `e^{−λK} <` [`ORACLE_TAIL_BOUND`].
pub fn required_truncation(lambda: f64) -> usize {
    (-ORACLE_TAIL_BOUND.ln() / lambda).floor() as usize + 1
}

/// `ρ(x) = (1 − e^{−λ}) Σ_{n<K} e^{−λn} |φ_n(x)|²`.
///
/// The normalised eigenfunctions come from the three-term recurrence
/// `ψ_{n+1} = √(2/(n+1)) q ψ_n − √(n/(n+1)) ψ_{n−1}` in `q = x/ℓ`,
/// `ℓ = √(ħ/mω)`, started from `ψ_0 = π^{−1/4} e^{−q²/2}`.
pub fn eigenfunction_sum_oracle(
    th: &OscillatorThermometer,
    t_s: SystemTemperature,
    x: f64,
    truncation: usize,
) -> Result<f64, ThermometerError> {
    let lambda = 2.0 * th.theta(t_s);
    let required = required_truncation(lambda);
    if truncation < required {
        return Err(ThermometerError::TruncationInsufficient {
            truncation,
            required,
            bound: ORACLE_TAIL_BOUND,
        });
    }
    let hbar = th.units().constants().hbar;
    let length = (hbar / (th.mass() * th.omega())).sqrt();
    let q = x / length;

    let decay = (-lambda).exp();
    let mut prev = 0.0;
    let mut psi = PI.powf(-0.25) * (-0.5 * q * q).exp();
    let mut weight = 1.0;
    let mut sum = 0.0;
    for n in 0..truncation {
        sum += weight * psi * psi;
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * q * psi - (nf / (nf + 1.0)).sqrt() * prev;
        prev = psi;
        psi = next;
        weight *= decay;
        if weight == 0.0 {
            break;
        }
    }
    Ok(-(-lambda).exp_m1() * sum / length)
}
