use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use qtemp_core::UnitSystem;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Cli, Format};
use crate::Failure;

pub const OUTPUT_DIR_VAR: &str = "QTEMP_OUTPUT_DIR";

/// A finished result: a table for CSV and a structured value for JSON.
pub struct Document {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub results: Value,
    pub units: UnitSystem,
}

#[derive(Serialize)]
struct Envelope<'a> {
    tool_version: &'static str,
    config_echo: &'a Cli,
    results: &'a Value,
    constants: Value,
}

/// Shortest round-trip form, with an exponent outside [1e-4, 1e15).
pub fn float(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

pub fn render(doc: &Document, cli: &Cli) -> Result<Vec<u8>, Failure> {
    match cli.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&doc.header).map_err(io_failure)?;
            for row in &doc.rows {
                w.write_record(row).map_err(io_failure)?;
            }
            w.into_inner().map_err(|e| Failure::Io(e.to_string()))
        }
        Format::Json => {
            let si = UnitSystem::Si.constants();
            let envelope = Envelope {
                tool_version: qtemp_core::VERSION,
                config_echo: cli,
                results: &doc.results,
                constants: json!({
                    "unit_system": doc.units.name(),
                    "hbar_si": si.hbar,
                    "boltzmann_si": si.boltzmann,
                    "atomic_mass_unit_si": si.atomic_mass_unit,
                }),
            };
            let mut bytes = serde_json::to_vec_pretty(&envelope).map_err(|e| Failure::Io(e.to_string()))?;
            bytes.push(b'\n');
            Ok(bytes)
        }
    }
}

fn io_failure(e: impl ToString) -> Failure {
    Failure::Io(e.to_string())
}

pub fn resolve(path: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_VAR) {
        Some(dir) if path.is_relative() && !dir.is_empty() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// Writes the whole document at once; files are written beside the target
/// and renamed into place.
pub fn emit(bytes: &[u8], output: Option<&Path>) -> Result<(), Failure> {
    match output {
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes).and_then(|_| out.flush()).map_err(io_failure)
        }
        Some(path) => {
            let path = resolve(path);
            let mut tmp = path.clone().into_os_string();
            tmp.push(".partial");
            let tmp = PathBuf::from(tmp);
            fs::write(&tmp, bytes)
                .and_then(|_| fs::rename(&tmp, &path))
                .map_err(|e| {
                    let _ = fs::remove_file(&tmp);
                    Failure::Io(format!("{}: {e}", path.display()))
                })
        }
    }
}
