use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Statistics of temperature read as a measured quantity: spin-system
/// temperature distributions, spectrum energy ↔ temperature maps, and
/// position-thermometer readouts.
#[derive(Debug, Parser, Serialize)]
#[command(name = "qtemp", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write the document here instead of standard output. Relative paths
    /// are resolved against QTEMP_OUTPUT_DIR when that variable is set.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "subcommand")]
pub enum Command {
    /// Temperature distribution of one half of a 2N-spin system before and
    /// after one spin of the other half is measured.
    Epr(EprArgs),
    /// Temperature change of the remaining spins after one spin is found
    /// unexcited or excited, exact and asymptotic.
    Shifts(ShiftArgs),
    /// Temperature for a mean energy of a spectrum file, or for a measured
    /// mean-square position of an oscillator thermometer.
    Calibrate(CalibrateArgs),
    /// Temperature assigned to every level of a spectrum file.
    Eigensystem(EigensystemArgs),
    /// Readout expectation, uncertainty and normalization deficit over a
    /// grid of frequencies, oscillator counts and system temperatures.
    Fig2(Fig2Args),
    /// Seeded Monte Carlo single-shot readouts.
    Sample(SampleArgs),
    /// Compare the closed-form thermal position density with a truncated
    /// sum over oscillator eigenfunctions.
    AppendixCheck(AppendixArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct EprArgs {
    /// Total number of spins 2N (even, ≥ 2).
    #[arg(long)]
    pub two_n: u64,
    /// Number of excited spins M, 0 ≤ M ≤ 2N.
    #[arg(long)]
    pub excited: u64,
    /// Temperature unit α = 2μB/k_B (temperatures are reported in units of α when 1).
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Weight the collapse branches with the uncorrected ground/excited labels.
    #[arg(long)]
    pub paper_literal_weights: bool,
    /// Build both distributions by enumerating every microstate (2N ≤ 126, at most 10⁷ states).
    #[arg(long)]
    pub brute_force: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct ShiftArgs {
    /// Total number of spins 2N (even).
    #[arg(long)]
    pub two_n: u64,
    /// Number of excited spins M, 1 < M < N.
    #[arg(long)]
    pub excited: u64,
    /// Temperature unit α = 2μB/k_B.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct CalibrateArgs {
    /// Spectrum JSON file: {"unit_system": "si"|"dimensionless", "levels": [{"energy", "degeneracy"}, ...]}.
    #[arg(long, requires = "energy", conflicts_with_all = ["mean_square", "omega"])]
    pub spectrum: Option<PathBuf>,
    /// Mean energy to invert, in the spectrum's energy unit (J in SI).
    #[arg(long, allow_negative_numbers = true)]
    pub energy: Option<f64>,
    /// Solve on the negative-temperature branch for energies above the infinite-temperature mean.
    #[arg(long)]
    pub allow_negative: bool,
    /// Relative tolerance of the temperature inversion.
    #[arg(long, default_value_t = 1e-12)]
    pub tolerance: f64,
    /// Bisection steps allowed once the temperature is bracketed.
    #[arg(long, default_value_t = 200)]
    pub max_iterations: usize,
    /// Measured mean-square position Y: m² in SI mode, natural length² otherwise.
    #[arg(long, requires = "omega")]
    pub mean_square: Option<f64>,
    /// Oscillator frequency: THz in SI mode (angular unless --ordinary-frequency), ω in natural units.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Oscillator mass: atomic mass units in SI mode, natural mass units otherwise.
    #[arg(long, default_value_t = 6.0)]
    pub mass_amu: f64,
    /// Unit convention for every physical flag.
    #[arg(long, value_enum, default_value_t = Units::Si)]
    pub units: Units,
    /// Read --omega as an ordinary frequency and multiply by 2π.
    #[arg(long)]
    pub ordinary_frequency: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct EigensystemArgs {
    /// Spectrum JSON file.
    #[arg(long)]
    pub spectrum: PathBuf,
    /// Map levels above the infinite-temperature mean to negative temperatures.
    #[arg(long)]
    pub allow_negative: bool,
    /// Relative tolerance of the temperature inversion.
    #[arg(long, default_value_t = 1e-12)]
    pub tolerance: f64,
    /// Bisection steps allowed once the temperature is bracketed.
    #[arg(long, default_value_t = 200)]
    pub max_iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    /// ω in THz, mass in atomic mass units, temperatures in kelvin.
    Si,
    /// ħ = k_B = 1; every quantity in natural units.
    Natural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Normal approximation to the mean-square reading.
    Clt,
    /// Exact gamma law of the mean-square reading.
    Gamma,
}

/// `LO:HI:STEPS`, STEPS evenly spaced values from LO to HI inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / last)
            .collect()
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, steps] = parts[..] else {
            return Err(format!("expected LO:HI:STEPS, got {s:?}"));
        };
        let lo: f64 = lo.parse().map_err(|e| format!("LO: {e}"))?;
        let hi: f64 = hi.parse().map_err(|e| format!("HI: {e}"))?;
        let steps: usize = steps.parse().map_err(|e| format!("STEPS: {e}"))?;
        if !(lo > 0.0 && lo.is_finite() && hi.is_finite() && hi >= lo) {
            return Err(format!("need 0 < LO ≤ HI, got {lo}:{hi}"));
        }
        if steps == 0 {
            return Err("STEPS must be at least 1".into());
        }
        Ok(Range { lo, hi, steps })
    }
}

#[derive(Debug, Args, Serialize)]
pub struct Fig2Args {
    /// Comma-separated oscillator frequencies: THz in SI mode (angular unless --ordinary-frequency), ω in natural units.
    #[arg(long, value_delimiter = ',', required = true)]
    pub omega: Vec<f64>,
    /// Oscillator mass: atomic mass units in SI mode, natural mass units otherwise.
    #[arg(long, default_value_t = 6.0)]
    pub mass_amu: f64,
    /// Comma-separated oscillator counts N.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<u64>,
    /// System temperatures LO:HI:STEPS: kelvin in SI mode, natural units otherwise.
    #[arg(long)]
    pub ts_range: Range,
    /// Unit convention for every physical flag.
    #[arg(long, value_enum, default_value_t = Units::Si)]
    pub units: Units,
    /// Read --omega as an ordinary frequency and multiply by 2π.
    #[arg(long)]
    pub ordinary_frequency: bool,
    /// Law of the mean-square reading.
    #[arg(long, value_enum, default_value_t = Model::Clt)]
    pub model: Model,
}

#[derive(Debug, Args, Serialize)]
pub struct SampleArgs {
    /// Number of single-shot readouts (≥ 1).
    #[arg(long)]
    pub shots: u64,
    /// 64-bit seed; equal seeds give identical output.
    #[arg(long)]
    pub seed: u64,
    /// Oscillator frequency: THz in SI mode (angular unless --ordinary-frequency), ω in natural units.
    #[arg(long)]
    pub omega: f64,
    /// Oscillator mass: atomic mass units in SI mode, natural mass units otherwise.
    #[arg(long, default_value_t = 6.0)]
    pub mass_amu: f64,
    /// Oscillators per reading N.
    #[arg(long)]
    pub n: u64,
    /// System temperature: kelvin in SI mode, natural units otherwise.
    #[arg(long)]
    pub t_s: f64,
    /// Unit convention for every physical flag.
    #[arg(long, value_enum, default_value_t = Units::Si)]
    pub units: Units,
    /// Read --omega as an ordinary frequency and multiply by 2π.
    #[arg(long)]
    pub ordinary_frequency: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct AppendixArgs {
    /// Comma-separated values of λ = ħω/k_B T_S (dimensionless).
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,4")]
    pub lambda: Vec<f64>,
    /// Grid points on [−span·ξ, span·ξ].
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    /// Half-width of the grid in units of the thermal length ξ.
    #[arg(long, default_value_t = 5.0)]
    pub span: f64,
    /// Eigenfunction terms to sum; defaults to the fewest meeting the 10⁻¹⁴ tail bound.
    #[arg(long)]
    pub truncation: Option<usize>,
}
