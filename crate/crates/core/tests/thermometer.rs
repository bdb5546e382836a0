use proptest::prelude::*;
use qtemp_core::quad::Adaptive;
use qtemp_core::thermometer::{sample_readouts, temperature_density};
use qtemp_core::{MeanSquare, OscillatorThermometer, ReadoutModel, SystemTemperature, ThermometerError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use statrs::function::erf::erf;
use statrs::function::gamma::ln_gamma;

fn natural(n: u64) -> OscillatorThermometer {
    OscillatorThermometer::natural(1.0, 1.0, n).unwrap()
}

fn at_theta(th: &OscillatorThermometer, theta: f64) -> SystemTemperature {
    th.temperature_at_theta(theta).unwrap()
}

proptest! {
    #[test]
    fn calibration_inverts_the_variance(ln_theta in -6.0f64..3.0, omega in 0.1f64..10.0, mass in 0.1f64..10.0) {
        let th = OscillatorThermometer::natural(omega, mass, 1).unwrap();
        let t = at_theta(&th, 10f64.powf(ln_theta));
        let back = th.calibrate(&th.position_variance(t)).unwrap();
        prop_assert!((back - t.value()).abs() / t.value() < 1e-12);
    }

    #[test]
    fn variance_grows_with_temperature(t in 0.01f64..100.0, factor in 1.001f64..5.0) {
        let th = natural(1);
        let a = th.position_variance_value(SystemTemperature::new(t).unwrap());
        let b = th.position_variance_value(SystemTemperature::new(t * factor).unwrap());
        prop_assert!(b > a);
    }
}

#[test]
fn variance_limits() {
    let th = natural(1);
    let cold = th.position_variance_value(SystemTemperature::new(1e-4).unwrap());
    assert_eq!(cold, th.ground_variance());
    // equipartition k_B T/(mω²)
    let hot = th.position_variance_value(SystemTemperature::new(1e4).unwrap());
    assert!((hot - 1e4).abs() / 1e4 < 1e-8);
    let half = th.position_variance_value(SystemTemperature::new(0.5).unwrap());
    assert!((half - 0.656_517_642_749_665_7).abs() < 1e-15);
}

#[test]
fn calibration_threshold() {
    let th = natural(1);
    let g = th.ground_variance();
    assert!(matches!(
        th.calibrate_value(g),
        Err(ThermometerError::SubGroundStateReading { .. })
    ));
    let t = th.calibrate(&MeanSquare::from_value(g * (1.0 + 1e-12), g)).unwrap();
    assert!(t > 0.0 && t < 0.05);
}

#[test]
fn single_reading_density_moments() {
    let th = natural(1);
    let t = SystemTemperature::new(0.7).unwrap();
    let p = th.single_y_density(t);
    let s2 = th.position_variance_value(t);
    // y = u² removes the 1/√y endpoint singularity
    let q = Adaptive::with_abs_tol(1e-12);
    let moment = |k: i32| {
        q.integrate(|u| 2.0 * u * u.powi(2 * k) * p.pdf(u * u), 0.0, 12.0 * s2.sqrt())
            .unwrap()
            .value
    };
    let (m0, m1, m2) = (moment(0), moment(1), moment(2));
    assert!((m0 - 1.0).abs() < 1e-10);
    assert!((m1 - s2).abs() < 1e-10);
    assert!((m2 - m1 * m1 - 2.0 * s2 * s2).abs() < 1e-9);
    assert_eq!(p.mean(), s2);
    assert!((p.variance() - 2.0 * s2 * s2).abs() < 1e-15);

    let shots = 1_000_000;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let ys: Vec<f64> = (0..shots)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            s2 * z * z
        })
        .collect();
    let mean = ys.iter().sum::<f64>() / shots as f64;
    let var = ys.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / (shots - 1) as f64;
    let se_mean = (var / shots as f64).sqrt();
    assert!((mean - m1).abs() < 3.0 * se_mean, "{mean} vs {m1}");
    let fourth = ys.iter().map(|y| (y - mean).powi(4)).sum::<f64>() / shots as f64;
    let se_var = ((fourth - var * var) / shots as f64).sqrt();
    assert!((var - 2.0 * s2 * s2).abs() < 3.0 * se_var, "{var}");
}

/// CDF of a mean of `n` squared N(0, σ²) draws, by quadrature of the gamma density.
fn gamma_cdf(n: u64, s2: f64, y: f64) -> f64 {
    let k = n as f64 / 2.0;
    let scale = 2.0 * s2 / n as f64;
    let ln_norm = -ln_gamma(k) - k * scale.ln();
    let pdf = |x: f64| {
        if x <= 0.0 {
            0.0
        } else {
            (ln_norm + (k - 1.0) * x.ln() - x / scale).exp()
        }
    };
    let lo = (s2 - 12.0 * s2 * (2.0 / n as f64).sqrt()).max(0.0);
    if y <= lo {
        return 0.0;
    }
    Adaptive::with_abs_tol(1e-12).integrate(pdf, lo, y).unwrap().value
}

fn ks_against(law_cdf: impl Fn(f64) -> f64, oracle: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    (0..=400)
        .map(|i| lo + (hi - lo) * i as f64 / 400.0)
        .map(|y| (law_cdf(y) - oracle(y)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn normal_approximation_fails_for_one_oscillator() {
    let th = natural(1);
    let t = SystemTemperature::new(1.0).unwrap();
    let s2 = th.position_variance_value(t);
    let law = th.many_body_y_density(t, ReadoutModel::Clt);
    assert!((law.mean() - s2).abs() < 1e-15);
    assert!((law.variance() - 2.0 * s2 * s2).abs() < 1e-14);
    let chi2 = |y: f64| erf((y / (2.0 * s2)).sqrt());
    let ks = ks_against(|y| law.cdf(y), chi2, 0.0, 8.0 * s2);
    assert!(ks > 0.1, "KS {ks}");
}

#[test]
fn normal_approximation_holds_for_many_oscillators() {
    let n = 10_000;
    let th = natural(n);
    let t = SystemTemperature::new(1.0).unwrap();
    let s2 = th.position_variance_value(t);
    let clt = th.many_body_y_density(t, ReadoutModel::Clt);
    let exact = th.many_body_y_density(t, ReadoutModel::Gamma);
    let sd = clt.std_dev();
    let (lo, hi) = (s2 - 6.0 * sd, s2 + 6.0 * sd);
    let ks = ks_against(|y| clt.cdf(y), |y| gamma_cdf(n, s2, y), lo, hi);
    assert!(ks < 0.01, "KS {ks}");
    // the library's gamma mode agrees with the quadrature oracle
    let ks = ks_against(|y| exact.cdf(y), |y| gamma_cdf(n, s2, y), lo, hi);
    assert!(ks < 1e-9, "gamma KS {ks}");
}

fn uncertainty_ratio(n: u64, theta: f64, model: ReadoutModel) -> f64 {
    let a = natural(n);
    let b = natural(4 * n);
    let t = at_theta(&a, theta);
    let ua = temperature_density(&a, t, model).unwrap().uncertainty;
    let ub = temperature_density(&b, t, model).unwrap().uncertainty;
    ua / ub
}

#[test]
fn uncertainty_halves_when_n_quadruples() {
    for &(theta, n) in &[(0.1, 100), (0.5, 100), (0.8, 100), (1.0, 200), (1.0, 400), (1.0, 2500)] {
        for model in [ReadoutModel::Clt, ReadoutModel::Gamma] {
            let ratio = uncertainty_ratio(n, theta, model);
            assert!((ratio - 2.0).abs() < 0.1, "θ={theta} N={n} {model:?}: {ratio}");
        }
    }
}

#[test]
fn threshold_truncation_narrows_small_n_readouts() {
    // ~4% of readings fall below the threshold at θ = 1, N = 100; the
    // conditioned spread is cut and the N:4N ratio drops below 2
    let clt = uncertainty_ratio(100, 1.0, ReadoutModel::Clt);
    let gamma = uncertainty_ratio(100, 1.0, ReadoutModel::Gamma);
    assert!((clt - 1.8414).abs() < 1e-3, "{clt}");
    assert!((gamma - 1.9047).abs() < 1e-3, "{gamma}");
}

#[test]
fn large_n_readout_is_sharp_and_unbiased() {
    let mut last = f64::INFINITY;
    for &n in &[100, 10_000, 1_000_000] {
        let th = natural(n);
        let t = at_theta(&th, 0.5);
        let r = temperature_density(&th, t, ReadoutModel::Clt).unwrap();
        assert!(r.uncertainty < last);
        last = r.uncertainty;
        if n == 1_000_000 {
            assert!(r.relative_bias().abs() < 1e-5);
            assert!(r.uncertainty / t.value() < 2e-3);
        }
    }
}

#[test]
fn density_integrates_to_one_minus_deficit() {
    for &n in &[1, 3, 10, 100, 1000] {
        for &theta in &[0.01, 0.3, 1.0, 5.0, 40.0] {
            for model in [ReadoutModel::Clt, ReadoutModel::Gamma] {
                let th = natural(n);
                let r = temperature_density(&th, at_theta(&th, theta), model).unwrap();
                let total = r.integral + r.normalization_deficit;
                assert!((total - 1.0).abs() < 1e-6, "N={n} θ={theta} {model:?}: {total}");
            }
        }
    }
}

#[test]
fn gamma_model_has_no_deficit_leak_at_large_n() {
    let th = natural(100);
    let t = at_theta(&th, 1.0);
    let clt = temperature_density(&th, t, ReadoutModel::Clt).unwrap();
    let exact = temperature_density(&th, t, ReadoutModel::Gamma).unwrap();
    assert!(clt.normalization_deficit > exact.normalization_deficit);
    assert!(exact.normalization_deficit > 0.0);
}

#[test]
fn sampler_counts_cold_shots() {
    let th = natural(5);
    let r = sample_readouts(&th, SystemTemperature::new(0.02).unwrap(), 10_000, 9).unwrap();
    assert!(r.sub_threshold > 1000);
    assert_eq!(r.sub_threshold as usize + r.readouts().len(), 10_000);
}

#[test]
fn sampler_agrees_with_quadrature_at_moderate_n() {
    let th = natural(400);
    let t = at_theta(&th, 0.5);
    let r = temperature_density(&th, t, ReadoutModel::Gamma).unwrap();
    let s = sample_readouts(&th, t, 40_000, 77).unwrap();
    let (mean, sd) = s.mean_and_std();
    let se = sd / (s.readouts().len() as f64).sqrt();
    assert!((mean - r.expectation).abs() < 3.0 * se, "{mean} vs {}", r.expectation);
    assert!((sd - r.uncertainty).abs() / r.uncertainty < 0.02);
}

#[test]
fn validation_errors() {
    assert!(OscillatorThermometer::natural(0.0, 1.0, 1).is_err());
    assert!(OscillatorThermometer::natural(1.0, -1.0, 1).is_err());
    assert!(matches!(
        OscillatorThermometer::natural(1.0, 1.0, 0),
        Err(ThermometerError::NoOscillators)
    ));
    assert!(SystemTemperature::new(0.0).is_err());
    assert!(SystemTemperature::new(f64::NAN).is_err());
}
