//! Single-shot readout distribution over temperature.
//!
//! The density of the reading `T` follows from the law of `Y` through the
//! calibration curve, `𝒫(T) = (dY/dT) P(Y(T))` with
//! `dY/dT = g (ħω/2k_B) csch²(θ_T) / T²`. The mass `P(Y ≤ g)` has no
//! temperature and is reported as the normalisation deficit; the expectation
//! and uncertainty are conditioned on a valid reading.

use serde::Serialize;

use super::{MeanSquareLaw, OscillatorThermometer, ReadoutModel, SystemTemperature, ThermometerError};
use crate::quad::Adaptive;
use crate::special::{coth_excess, csch_squared};

/// Probability mass left outside the integration range on either side.
const TAIL_MASS: f64 = 1e-13;
const DENSITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReadoutDistribution {
    pub thermometer: OscillatorThermometer,
    pub t_s: f64,
    pub model: ReadoutModel,
    /// Mass of the `Y` law at or below the ground-state variance.
    pub normalization_deficit: f64,
    /// Quadrature of `𝒫(T)` over the integration range.
    pub integral: f64,
    /// Mean reading, conditioned on `Y` above the threshold.
    pub expectation: f64,
    /// Standard deviation of the reading, same conditioning.
    pub uncertainty: f64,
    /// Integration range in temperature; `lower` is 0 when the range reaches the threshold.
    pub lower: f64,
    pub upper: f64,
    #[serde(skip)]
    law: MeanSquareLaw,
}

/// Excess `(Y − g)/g` that calibrates to a given temperature.
fn excess_at(th: &OscillatorThermometer, t: f64) -> f64 {
    coth_excess(th.theta_scale() / t)
}

/// Temperature read for an excess `e > 0`.
fn temperature_at(th: &OscillatorThermometer, e: f64) -> f64 {
    th.theta_scale() / (0.5 * (2.0 / e).ln_1p())
}

fn density(th: &OscillatorThermometer, law: &MeanSquareLaw, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let c = th.theta_scale();
    let theta = c / t;
    // dY/dT divided by g, since the law is over Y/g
    let jacobian = csch_squared(theta) * c / (t * t);
    if jacobian == 0.0 {
        return 0.0;
    }
    jacobian * law.pdf_excess(excess_at(th, t))
}

/// Readout distribution of the thermometer at system temperature `t_s`.
pub fn temperature_density(
    th: &OscillatorThermometer,
    t_s: SystemTemperature,
    model: ReadoutModel,
) -> Result<ReadoutDistribution, ThermometerError> {
    let law = th.many_body_y_density(t_s, model);
    let mean = law.mean_excess();
    let step = law.excess_std();

    // Breakpoints in excess space: a ladder of standard deviations out to
    // the tail cut, then geometric steps down towards the threshold.
    let mut excesses = vec![mean];
    let mut k = 1.0;
    while law.sf_excess(mean + k * step) > TAIL_MASS && k < 1e4 {
        excesses.push(mean + k * step);
        k += 1.0;
    }
    let upper_e = mean + k * step;
    excesses.push(upper_e);

    let mut k = 1.0;
    let mut reaches_threshold = false;
    loop {
        let e = mean - k * step;
        if e <= 0.0 {
            reaches_threshold = true;
            break;
        }
        excesses.push(e);
        if law.cdf_excess(e) - law.cdf_excess(0.0) <= TAIL_MASS || k >= 1e4 {
            break;
        }
        k += 1.0;
    }
    let lowest = excesses.iter().cloned().fold(f64::INFINITY, f64::min);
    if reaches_threshold {
        excesses.extend((1..=16).map(|j| lowest * 10f64.powi(-j)));
    }

    let mut breaks: Vec<f64> = excesses.iter().map(|&e| temperature_at(th, e)).collect();
    if reaches_threshold {
        breaks.push(0.0);
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let lower = breaks[0];
    let upper = *breaks.last().unwrap();

    let f = |t: f64| density(th, &law, t);
    let mass = Adaptive::with_abs_tol(DENSITY_TOL).integrate_pieces(f, &breaks)?;
    let integral = mass.value;

    let scale = t_s.value();
    let first = Adaptive {
        abs_tol: DENSITY_TOL * scale,
        rel_tol: DENSITY_TOL,
        ..Adaptive::default()
    }
    .integrate_pieces(|t| t * f(t), &breaks)?;
    let expectation = first.value / integral;

    let central = Adaptive {
        abs_tol: DENSITY_TOL * scale * scale,
        rel_tol: DENSITY_TOL,
        ..Adaptive::default()
    }
    .integrate_pieces(|t| (t - expectation).powi(2) * f(t), &breaks)?;
    let uncertainty = (central.value / integral).max(0.0).sqrt();

    Ok(ReadoutDistribution {
        thermometer: *th,
        t_s: t_s.value(),
        model,
        normalization_deficit: law.mass_below_threshold(),
        integral,
        expectation,
        uncertainty,
        lower,
        upper,
        law,
    })
}

impl ReadoutDistribution {
    /// `𝒫(T)`, unconditioned (integrates to `1 − deficit`).
    pub fn density(&self, t: f64) -> f64 {
        density(&self.thermometer, &self.law, t)
    }

    /// Conditioned CDF of the reading, computed through the law of `Y`.
    pub fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let below = self.law.cdf_excess(0.0);
        let e = excess_at(&self.thermometer, t);
        ((self.law.cdf_excess(e) - below) / (1.0 - below)).clamp(0.0, 1.0)
    }

    /// Signed bias `E[T] − T_S` of a single-shot reading.
    pub fn bias(&self) -> f64 {
        self.expectation - self.t_s
    }

    pub fn relative_bias(&self) -> f64 {
        self.bias() / self.t_s
    }
}
