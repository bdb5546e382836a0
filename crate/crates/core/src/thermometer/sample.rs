//! Monte Carlo single-shot readouts.
//!
//! Each shot draws `N` positions from the thermal Gaussian (variance σ²),
//! forms `Y = (1/N) Σ x²` and calibrates it. Shots are generated in fixed
//! shards of [`SHARD_SHOTS`]; shard `i` uses ChaCha8 seeded with the run seed
//! on stream `i`, so the output is independent of thread count and identical
//! across platforms. Gaussians come from `rand_distr::StandardNormal`
//! (ziggurat).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::{OscillatorThermometer, SystemTemperature, ThermometerError};

pub const SHARD_SHOTS: u64 = 4096;

/// One measurement: the raw reading and its calibrated temperature, or
/// `None` when the reading fell at or below the ground-state variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Shot {
    pub mean_square: f64,
    pub temperature: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleReport {
    pub seed: u64,
    pub shots: Vec<Shot>,
    pub sub_threshold: u64,
}

impl SampleReport {
    /// Calibrated temperatures of the valid shots, in shot order.
    pub fn readouts(&self) -> Vec<f64> {
        self.shots.iter().filter_map(|s| s.temperature).collect()
    }

    /// Mean and sample standard deviation of the valid readouts.
    pub fn mean_and_std(&self) -> (f64, f64) {
        let r = self.readouts();
        let n = r.len() as f64;
        let mean = r.iter().sum::<f64>() / n;
        let var = r.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, var.sqrt())
    }
}

pub fn sample_readouts(
    th: &OscillatorThermometer,
    t_s: SystemTemperature,
    shots: u64,
    seed: u64,
) -> Result<SampleReport, ThermometerError> {
    if shots == 0 {
        return Err(ThermometerError::NoShots);
    }
    let sigma = th.position_variance_value(t_s).sqrt();
    let count = th.count();
    let shards = shots.div_ceil(SHARD_SHOTS);

    let per_shard: Vec<Vec<Shot>> = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard);
            let start = shard * SHARD_SHOTS;
            let len = SHARD_SHOTS.min(shots - start);
            (0..len)
                .map(|_| {
                    let mut sum = 0.0;
                    for _ in 0..count {
                        let z: f64 = rng.sample(StandardNormal);
                        let x = sigma * z;
                        sum += x * x;
                    }
                    let y = sum / count as f64;
                    Shot {
                        mean_square: y,
                        temperature: th.calibrate_value(y).ok(),
                    }
                })
                .collect()
        })
        .collect();

    let shots: Vec<Shot> = per_shard.into_iter().flatten().collect();
    let sub_threshold = shots.iter().filter(|s| s.temperature.is_none()).count() as u64;
    Ok(SampleReport {
        seed,
        shots,
        sub_threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_runs_repeat() {
        let th = OscillatorThermometer::natural(1.0, 1.0, 7).unwrap();
        let t = SystemTemperature::new(0.4).unwrap();
        let a = sample_readouts(&th, t, 5000, 11).unwrap();
        let b = sample_readouts(&th, t, 5000, 11).unwrap();
        assert_eq!(a, b);
        let c = sample_readouts(&th, t, 5000, 12).unwrap();
        assert_ne!(a.shots, c.shots);
        assert_eq!(a.shots.len(), 5000);
    }

    #[test]
    fn prefix_is_stable_across_shot_counts() {
        let th = OscillatorThermometer::natural(1.0, 1.0, 3).unwrap();
        let t = SystemTemperature::new(1.0).unwrap();
        let short = sample_readouts(&th, t, 100, 5).unwrap();
        let long = sample_readouts(&th, t, 9000, 5).unwrap();
        assert_eq!(short.shots[..], long.shots[..100]);
    }

    #[test]
    fn cold_thermometer_reports_sub_threshold_shots() {
        let th = OscillatorThermometer::natural(1.0, 1.0, 10).unwrap();
        let t = th.temperature_at_theta(30.0).unwrap();
        let r = sample_readouts(&th, t, 2000, 3).unwrap();
        assert!(r.sub_threshold > 0);
        assert_eq!(r.sub_threshold as usize + r.readouts().len(), 2000);
    }

    #[test]
    fn zero_shots_rejected() {
        let th = OscillatorThermometer::natural(1.0, 1.0, 1).unwrap();
        let t = SystemTemperature::new(1.0).unwrap();
        assert_eq!(sample_readouts(&th, t, 0, 1), Err(ThermometerError::NoShots));
    }
}
