//! Benchmarks for the engine's hot paths, registered by `benches/engine.rs`.

use std::hint::black_box;

use criterion::{BenchmarkId, Criterion};
use qtemp_core::spin::{brute_force_distributions, no_signaling_report};
use qtemp_core::thermometer::{eigenfunction_sum_oracle, sample_readouts, temperature_density};
use qtemp_core::{
    BranchRule, EnergySpectrum, OscillatorThermometer, ReadoutModel, SpinEnsemble, TemperatureMap,
};

pub fn spin(c: &mut Criterion) {
    let mut group = c.benchmark_group("no_signaling");
    for two_n in [16u64, 40, 64] {
        let sys = SpinEnsemble::new(two_n, two_n / 4, 1.0).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(two_n), &sys, |b, sys| {
            b.iter(|| no_signaling_report(black_box(sys), BranchRule::Counting))
        });
    }
    group.finish();

    let sys = SpinEnsemble::new(16, 8, 1.0).unwrap();
    c.bench_function("enumerate_16", |b| {
        b.iter(|| brute_force_distributions(black_box(&sys), BranchRule::Counting).unwrap())
    });
}

pub fn inversion(c: &mut Criterion) {
    let map = TemperatureMap::new(EnergySpectrum::spin_composite(40, 1.0).unwrap()).unwrap();
    c.bench_function("invert_composite_40", |b| b.iter(|| map.temperature(black_box(-31.0)).unwrap()));
    c.bench_function("eigensystem_composite_40", |b| b.iter(|| map.eigensystem().unwrap()));
}

pub fn readout(c: &mut Criterion) {
    let mut group = c.benchmark_group("temperature_density");
    for n in [10u64, 100, 10_000] {
        let th = OscillatorThermometer::natural(1.0, 1.0, n).unwrap();
        let t = th.temperature_at_theta(1.0).unwrap();
        for model in [ReadoutModel::Clt, ReadoutModel::Gamma] {
            group.bench_function(BenchmarkId::new(format!("{model:?}"), n), |b| {
                b.iter(|| temperature_density(&th, black_box(t), model).unwrap())
            });
        }
    }
    group.finish();
}

pub fn sampler(c: &mut Criterion) {
    let th = OscillatorThermometer::natural(1.0, 1.0, 100).unwrap();
    let t = th.temperature_at_theta(1.0).unwrap();
    let mut group = c.benchmark_group("sample_readouts");
    group.sample_size(20);
    group.bench_function("n100_shots10k", |b| {
        b.iter(|| sample_readouts(&th, t, black_box(10_000), 7).unwrap())
    });
    group.finish();

    let single = th.with_count(1).unwrap();
    c.bench_function("eigenfunction_sum_65", |b| {
        b.iter(|| eigenfunction_sum_oracle(&single, t, black_box(0.3), 65).unwrap())
    });
}
