use std::f64::consts::PI;

use num_rational::BigRational;
use qtemp_core::spectrum::read_spectrum_file;
use qtemp_core::spin::{
    brute_force_distributions, branch_weights, format_rational, microcanonical_temperature,
    post_measurement_distribution, post_measurement_probabilities, pre_measurement_distribution,
    pre_measurement_probabilities, rational_to_f64, temperature_shifts,
};
use qtemp_core::thermometer::{
    eigenfunction_sum_oracle, required_truncation, sample_readouts, temperature_density,
    thermal_position_density,
};
use qtemp_core::{
    BranchRule, FrequencyConvention, MappedTemperature, OscillatorThermometer, ReadoutModel,
    SpinEnsemble, SpinTemperature, SystemTemperature, TemperatureMap, UnitSystem,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{
    AppendixArgs, CalibrateArgs, EigensystemArgs, EprArgs, Fig2Args, Model, SampleArgs, ShiftArgs, Units,
};
use crate::output::{float, Document};
use crate::Failure;

/// Largest system handled in exact rational arithmetic by default.
const EXACT_LIMIT: u64 = 64;

fn temperature_cell(t: Option<SpinTemperature>) -> String {
    t.map_or_else(|| "undefined".to_string(), |t| t.to_string())
}

fn temperature_value(t: Option<SpinTemperature>) -> Value {
    match t {
        Some(SpinTemperature::Finite(x)) => json!(x),
        Some(other) => json!(other.to_string()),
        None => json!("undefined"),
    }
}

pub fn epr(args: &EprArgs) -> Result<Document, Failure> {
    let system = SpinEnsemble::new(args.two_n, args.excited, args.alpha)?;
    let rule = if args.paper_literal_weights {
        BranchRule::PaperLiteral
    } else {
        BranchRule::Counting
    };
    let header = vec![
        "m", "temperature", "p_pre", "p_post", "diff", "p_pre_float", "p_post_float", "diff_float",
    ];
    let weights = branch_weights(&system, rule);
    let mut results = json!({
        "two_n": system.two_n(),
        "excited": system.excited(),
        "alpha": system.alpha(),
        "system_temperature": temperature_value(system.temperature().ok()),
        "branch_rule": rule,
        "branch_weights": weights,
    });

    let exact = args.brute_force || system.two_n() <= EXACT_LIMIT;
    let (rows, outcomes, holds, max_deviation) = if exact {
        let (pre, post) = if args.brute_force {
            brute_force_distributions(&system, rule)?
        } else {
            (
                pre_measurement_distribution(&system, system.half())?,
                post_measurement_distribution(&system, rule),
            )
        };
        let mut rows = Vec::new();
        let mut outcomes = Vec::new();
        for (a, b) in pre.entries.iter().zip(&post.entries) {
            let diff: BigRational = &b.probability - &a.probability;
            let (pf, qf, df) = (
                rational_to_f64(&a.probability),
                rational_to_f64(&b.probability),
                rational_to_f64(&diff),
            );
            rows.push(vec![
                a.m.to_string(),
                temperature_cell(a.temperature),
                format_rational(&a.probability),
                format_rational(&b.probability),
                format_rational(&diff),
                float(pf),
                float(qf),
                float(df),
            ]);
            outcomes.push(json!({
                "m": a.m,
                "temperature": temperature_value(a.temperature),
                "p_pre": format_rational(&a.probability),
                "p_post": format_rational(&b.probability),
                "diff": format_rational(&diff),
                "p_pre_float": pf,
                "p_post_float": qf,
                "diff_float": df,
            }));
        }
        let max = pre.max_deviation(&post);
        let holds = pre.same_probabilities(&post);
        (rows, outcomes, holds, json!(format_rational(&max)))
    } else {
        let pre = pre_measurement_probabilities(&system);
        let post = post_measurement_probabilities(&system, rule);
        let mut rows = Vec::new();
        let mut outcomes = Vec::new();
        let mut max = 0.0f64;
        for (&(m, p), &(_, q)) in pre.iter().zip(&post) {
            let t = microcanonical_temperature(system.half(), m, system.alpha()).ok();
            max = max.max((q - p).abs());
            rows.push(vec![
                m.to_string(),
                temperature_cell(t),
                String::new(),
                String::new(),
                String::new(),
                float(p),
                float(q),
                float(q - p),
            ]);
            outcomes.push(json!({
                "m": m,
                "temperature": temperature_value(t),
                "p_pre_float": p,
                "p_post_float": q,
                "diff_float": q - p,
            }));
        }
        (rows, outcomes, max <= 1e-12, json!(max))
    };

    results["arithmetic"] = json!(if exact { "exact" } else { "log_domain" });
    results["method"] = json!(if args.brute_force { "enumeration" } else { "closed_form" });
    results["no_signaling"] = json!({"holds": holds, "max_deviation": max_deviation});
    results["outcomes"] = Value::Array(outcomes);
    Ok(Document {
        header,
        rows,
        results,
        units: UnitSystem::Dimensionless,
    })
}

pub fn shifts(args: &ShiftArgs) -> Result<Document, Failure> {
    let s = temperature_shifts(args.two_n, args.excited, args.alpha)?;
    let t = microcanonical_temperature(args.two_n, args.excited, args.alpha)?;
    let row = vec![
        args.two_n.to_string(),
        args.excited.to_string(),
        float(args.alpha),
        t.to_string(),
        float(s.ground_exact),
        float(s.excited_exact),
        float(s.ground_asymptotic),
        float(s.excited_asymptotic),
    ];
    Ok(Document {
        header: vec![
            "two_n",
            "excited",
            "alpha",
            "temperature",
            "delta_ground_exact",
            "delta_excited_exact",
            "delta_ground_asymptotic",
            "delta_excited_asymptotic",
        ],
        rows: vec![row],
        results: json!({
            "two_n": args.two_n,
            "excited": args.excited,
            "alpha": args.alpha,
            "temperature": temperature_value(Some(t)),
            "shifts": s,
        }),
        units: UnitSystem::Dimensionless,
    })
}

fn tolerance(tol: f64) -> Result<f64, Failure> {
    if tol > 0.0 && tol < 1.0 {
        Ok(tol)
    } else {
        Err(Failure::Domain(format!("tolerance must lie in (0, 1), got {tol}")))
    }
}

fn build_thermometer(
    omega: f64,
    mass: f64,
    n: u64,
    units: Units,
    ordinary: bool,
) -> Result<OscillatorThermometer, Failure> {
    let th = match units {
        Units::Si => {
            let convention = if ordinary {
                FrequencyConvention::Ordinary
            } else {
                FrequencyConvention::Angular
            };
            OscillatorThermometer::from_thz_amu(omega, mass, n, convention)?
        }
        Units::Natural => {
            let omega = if ordinary { 2.0 * PI * omega } else { omega };
            OscillatorThermometer::natural(omega, mass, n)?
        }
    };
    Ok(th)
}

fn unit_system(units: Units) -> UnitSystem {
    match units {
        Units::Si => UnitSystem::Si,
        Units::Natural => UnitSystem::Dimensionless,
    }
}

pub fn calibrate(args: &CalibrateArgs) -> Result<Document, Failure> {
    match (&args.spectrum, args.energy, args.mean_square, args.omega) {
        (Some(path), Some(energy), None, None) => {
            let spectrum = read_spectrum_file(path)?;
            let units = spectrum.units();
            let map = TemperatureMap::new(spectrum)?
                .with_tolerance(tolerance(args.tolerance)?)
                .with_max_iterations(args.max_iterations)
                .with_negative_branch(args.allow_negative);
            let t = map.temperature(energy)?;
            let (lo, hi) = map.domain();
            Ok(Document {
                header: vec!["energy", "temperature"],
                rows: vec![vec![float(energy), float(t)]],
                results: json!({"energy": energy, "temperature": t, "domain": [lo, hi]}),
                units,
            })
        }
        (None, None, Some(y), Some(omega)) => {
            let th = build_thermometer(omega, args.mass_amu, 1, args.units, args.ordinary_frequency)?;
            let t = th.calibrate_value(y)?;
            Ok(Document {
                header: vec!["mean_square", "temperature"],
                rows: vec![vec![float(y), float(t)]],
                results: json!({
                    "mean_square": y,
                    "temperature": t,
                    "ground_variance": th.ground_variance(),
                    "thermometer": th,
                }),
                units: unit_system(args.units),
            })
        }
        _ => Err(Failure::Domain(
            "give either --spectrum with --energy, or --mean-square with --omega".into(),
        )),
    }
}

pub fn eigensystem(args: &EigensystemArgs) -> Result<Document, Failure> {
    let spectrum = read_spectrum_file(&args.spectrum)?;
    let units = spectrum.units();
    let map = TemperatureMap::new(spectrum)?
        .with_tolerance(tolerance(args.tolerance)?)
                .with_max_iterations(args.max_iterations)
        .with_negative_branch(args.allow_negative);
    let sys = map.eigensystem()?;
    let rows = sys
        .pairs
        .iter()
        .map(|p| {
            vec![
                float(p.energy),
                p.degeneracy.to_string(),
                match p.temperature {
                    MappedTemperature::Value(t) => float(t),
                    MappedTemperature::OutOfDomain => "out_of_domain".into(),
                },
            ]
        })
        .collect();
    let (lo, hi) = map.domain();
    Ok(Document {
        header: vec!["energy", "degeneracy", "temperature"],
        rows,
        results: json!({"domain": [lo, hi], "pairs": sys.pairs}),
        units,
    })
}

fn model(m: Model) -> ReadoutModel {
    match m {
        Model::Clt => ReadoutModel::Clt,
        Model::Gamma => ReadoutModel::Gamma,
    }
}

pub fn fig2(args: &Fig2Args) -> Result<Document, Failure> {
    if args.n.contains(&0) {
        return Err(Failure::Domain("oscillator counts must be at least 1".into()));
    }
    let temps = args.ts_range.values();
    let mut grid = Vec::new();
    for &omega in &args.omega {
        let th = build_thermometer(omega, args.mass_amu, 1, args.units, args.ordinary_frequency)?;
        for &n in &args.n {
            for &t in &temps {
                grid.push((omega, th.with_count(n)?, n, SystemTemperature::new(t)?));
            }
        }
    }
    let readout_model = model(args.model);
    // collected in sweep order
    let computed = grid
        .par_iter()
        .map(|(omega, th, n, t)| Ok((*omega, *n, temperature_density(th, *t, readout_model)?)))
        .collect::<Result<Vec<_>, qtemp_core::Error>>()?;

    let mut rows = Vec::new();
    let mut points = Vec::new();
    for (omega, n, r) in &computed {
        rows.push(vec![
            float(r.t_s),
            float(*omega),
            n.to_string(),
            float(r.expectation),
            float(r.uncertainty),
            float(r.normalization_deficit),
        ]);
        points.push(json!({
            "t_s": r.t_s,
            "omega": omega,
            "n": n,
            "expectation": r.expectation,
            "uncertainty": r.uncertainty,
            "normalization_deficit": r.normalization_deficit,
            "relative_bias": r.relative_bias(),
        }));
    }
    Ok(Document {
        header: vec!["t_s", "omega", "n", "expectation", "uncertainty", "normalization_deficit"],
        rows,
        results: json!({"model": readout_model, "points": points}),
        units: unit_system(args.units),
    })
}

pub fn sample(args: &SampleArgs) -> Result<Document, Failure> {
    let th = build_thermometer(args.omega, args.mass_amu, args.n, args.units, args.ordinary_frequency)?;
    let t = SystemTemperature::new(args.t_s)?;
    let report = sample_readouts(&th, t, args.shots, args.seed)?;
    let rows = report
        .shots
        .iter()
        .enumerate()
        .map(|(i, s)| {
            vec![
                i.to_string(),
                float(s.mean_square),
                s.temperature.map_or_else(|| "below_threshold".into(), float),
            ]
        })
        .collect();
    let valid = report.shots.len() as u64 - report.sub_threshold;
    let summary = if valid >= 2 {
        let (mean, sd) = report.mean_and_std();
        json!({"mean": mean, "std": sd, "standard_error": sd / (valid as f64).sqrt()})
    } else {
        Value::Null
    };
    Ok(Document {
        header: vec!["shot", "mean_square", "temperature"],
        rows,
        results: json!({
            "seed": report.seed,
            "shots": report.shots.len(),
            "sub_threshold": report.sub_threshold,
            "summary": summary,
            "readouts": report.shots,
        }),
        units: unit_system(args.units),
    })
}

pub fn appendix_check(args: &AppendixArgs) -> Result<Document, Failure> {
    if args.points < 2 {
        return Err(Failure::Domain("need at least 2 grid points".into()));
    }
    if !(args.span > 0.0 && args.span.is_finite()) {
        return Err(Failure::Domain(format!("span must be positive, got {}", args.span)));
    }
    let th = OscillatorThermometer::natural(1.0, 1.0, 1)?;
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for &lambda in &args.lambda {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Failure::Domain(format!("lambda must be positive, got {lambda}")));
        }
        // θ = λ/2
        let t = th.temperature_at_theta(0.5 * lambda)?;
        let rho = thermal_position_density(&th, t);
        let truncation = args.truncation.unwrap_or_else(|| required_truncation(lambda));
        let mut worst = 0.0f64;
        for i in 0..args.points {
            let x = rho.xi * args.span * (2.0 * i as f64 / (args.points - 1) as f64 - 1.0);
            let closed = rho.pdf(x);
            let sum = eigenfunction_sum_oracle(&th, t, x, truncation)?;
            worst = worst.max((closed - sum).abs());
            rows.push(vec![float(lambda), float(x), float(closed), float(sum), float((closed - sum).abs())]);
        }
        checks.push(json!({
            "lambda": lambda,
            "xi": rho.xi,
            "truncation": truncation,
            "max_abs_deviation": worst,
        }));
    }
    Ok(Document {
        header: vec!["lambda", "x", "closed_form", "eigenfunction_sum", "abs_deviation"],
        rows,
        results: json!({"checks": checks}),
        units: UnitSystem::Dimensionless,
    })
}
