//! JSON spectrum documents.
//!
//! ```json
//! {"unit_system": "dimensionless", "levels": [{"energy": -1, "degeneracy": 1}, ...]}
//! ```
//!
//! Ordering and degeneracy violations are raised while the document is being
//! read, so the error carries the line and column of the offending level.

use std::fmt;
use std::path::Path;

use serde::de::{self, DeserializeSeed, Deserializer, MapAccess, SeqAccess, Visitor};
use serde::{Deserialize, Serialize};

use super::{EnergySpectrum, Level, SpectrumError};
use crate::units::UnitSystem;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumDocument {
    pub unit_system: UnitSystem,
    #[serde(deserialize_with = "increasing_levels")]
    pub levels: Vec<Level>,
}

/// One level, checked against its predecessor while its own object is being
/// read so that errors point at that object.
struct NextLevel {
    index: usize,
    previous: Option<f64>,
}

impl<'de> DeserializeSeed<'de> for NextLevel {
    type Value = Level;

    fn deserialize<D: Deserializer<'de>>(self, d: D) -> Result<Level, D::Error> {
        d.deserialize_struct("Level", &["energy", "degeneracy"], self)
    }
}

impl<'de> Visitor<'de> for NextLevel {
    type Value = Level;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an {energy, degeneracy} object")
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Level, A::Error> {
        let mut energy = None;
        let mut degeneracy = None;
        while let Some(key) = map.next_key::<String>()? {
            match key.as_str() {
                "energy" if energy.is_none() => energy = Some(map.next_value::<f64>()?),
                "degeneracy" if degeneracy.is_none() => degeneracy = Some(map.next_value::<u64>()?),
                "energy" | "degeneracy" => return Err(de::Error::duplicate_field("level field")),
                other => return Err(de::Error::unknown_field(other, &["energy", "degeneracy"])),
            }
        }
        let energy = energy.ok_or_else(|| de::Error::missing_field("energy"))?;
        let degeneracy = degeneracy.ok_or_else(|| de::Error::missing_field("degeneracy"))?;
        let index = self.index;
        if degeneracy == 0 {
            return Err(de::Error::custom(format!(
                "level {index}: degeneracy must be at least 1"
            )));
        }
        if let Some(prev) = self.previous {
            if energy <= prev {
                return Err(de::Error::custom(format!(
                    "level {index}: energy {energy} is not strictly above the previous level {prev}"
                )));
            }
        }
        Ok(Level::new(energy, degeneracy))
    }
}

struct LevelsVisitor;

impl<'de> Visitor<'de> for LevelsVisitor {
    type Value = Vec<Level>;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a non-empty array of {energy, degeneracy} objects")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Vec<Level>, A::Error> {
        let mut levels: Vec<Level> = Vec::new();
        while let Some(level) = seq.next_element_seed(NextLevel {
            index: levels.len(),
            previous: levels.last().map(|l| l.energy),
        })? {
            levels.push(level);
        }
        if levels.is_empty() {
            return Err(de::Error::custom("spectrum has no levels"));
        }
        Ok(levels)
    }
}

fn increasing_levels<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Level>, D::Error> {
    d.deserialize_seq(LevelsVisitor)
}

impl From<&EnergySpectrum> for SpectrumDocument {
    fn from(s: &EnergySpectrum) -> Self {
        SpectrumDocument {
            unit_system: s.units(),
            levels: s.levels().to_vec(),
        }
    }
}

/// Parses a spectrum document; errors name the line and column.
pub fn parse_spectrum(text: &str) -> Result<EnergySpectrum, SpectrumError> {
    let doc: SpectrumDocument =
        serde_json::from_str(text).map_err(|e| SpectrumError::Parse(e.to_string()))?;
    EnergySpectrum::new(doc.levels, doc.unit_system)
}

pub fn read_spectrum_file(path: &Path) -> Result<EnergySpectrum, SpectrumError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SpectrumError::Parse(format!("{}: {e}", path.display())))?;
    parse_spectrum(&text).map_err(|e| match e {
        SpectrumError::Parse(msg) => SpectrumError::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}
