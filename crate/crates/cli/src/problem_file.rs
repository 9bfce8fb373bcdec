//! JSON problem files.
//!
//! ```json
//! {
//!   "name": "xor-2",
//!   "arg_bits": 1,
//!   "value_bits": 1,
//!   "settings": [
//!     { "table": "01", "solution": "1" },
//!     { "table": "10", "solution": "1" }
//!   ]
//! }
//! ```
//!
//! A table lists `f(a)` for `a = 0, 1, ...`, each value `value_bits` wide.
//! The setting string defaults to the table itself; give `"setting"` to
//! label settings differently (Grover drawers, for instance).

use std::path::Path;

use serde::{Deserialize, Serialize};
use zol_core::problems::{Family, OracleProblem, SettingEntry};
use zol_core::Bits;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    pub arg_bits: usize,
    pub value_bits: usize,
    pub settings: Vec<SettingFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SettingFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub setting: Option<String>,
    pub table: String,
    pub solution: String,
}

fn family_from_name(name: &str) -> Option<Family> {
    Some(match name {
        "grover" => Family::Grover,
        "dj" | "deutsch-jozsa" => Family::DeutschJozsa,
        "simon" => Family::Simon,
        "periodic" => Family::Periodic,
        "custom" => Family::Custom,
        _ => return None,
    })
}

fn parse_bits(origin: &str, field: &str, text: &str) -> Result<Bits, CliError> {
    Bits::parse(text).map_err(|e| CliError::File(format!("{origin}: {field}: {e}")))
}

impl ProblemFile {
    pub fn from_json(origin: &str, text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| {
            CliError::File(format!(
                "{origin}:{}:{}: {}",
                e.line(),
                e.column(),
                strip_position(&e.to_string())
            ))
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("problem files serialize");
        s.push('\n');
        s
    }

    /// Validates the file and builds the problem it describes.
    pub fn to_problem(&self, origin: &str) -> Result<OracleProblem, CliError> {
        let family = match &self.family {
            None => Family::Custom,
            Some(name) => family_from_name(name)
                .ok_or_else(|| CliError::File(format!("{origin}: family: unknown family {name:?}")))?,
        };
        if !(1..=16).contains(&self.arg_bits) {
            return Err(CliError::File(format!(
                "{origin}: arg_bits: must be in 1..=16, got {}",
                self.arg_bits
            )));
        }
        if !(1..=32).contains(&self.value_bits) {
            return Err(CliError::File(format!(
                "{origin}: value_bits: must be in 1..=32, got {}",
                self.value_bits
            )));
        }
        if self.settings.is_empty() {
            return Err(CliError::File(format!(
                "{origin}: settings: at least one setting is required"
            )));
        }
        let rows = 1usize << self.arg_bits;
        let w = self.value_bits;
        let mut entries = Vec::with_capacity(self.settings.len());
        let mut first_setting: Option<(usize, usize)> = None;
        for (i, s) in self.settings.iter().enumerate() {
            let at = |field: &str| format!("settings[{i}].{field}");
            if s.table.len() != rows * w || !s.table.bytes().all(|c| c == b'0' || c == b'1') {
                return Err(CliError::File(format!(
                    "{origin}: {}: expected {} binary digits ({rows} values of {w} bits), got {:?}",
                    at("table"),
                    rows * w,
                    s.table
                )));
            }
            let table: Vec<u64> = (0..rows)
                .map(|a| u64::from_str_radix(&s.table[a * w..(a + 1) * w], 2).expect("checked binary digits"))
                .collect();
            let solution = parse_bits(origin, &at("solution"), &s.solution)?;
            let entry = match &s.setting {
                Some(text) => SettingEntry {
                    setting: parse_bits(origin, &at("setting"), text)?,
                    table,
                    solution,
                },
                None => SettingEntry::tabled(table, w, solution)
                    .map_err(|e| CliError::File(format!("{origin}: {}: {e}", at("table"))))?,
            };
            match first_setting {
                None => first_setting = Some((i, entry.setting.len())),
                Some((j, len)) if len != entry.setting.len() => {
                    return Err(CliError::File(format!(
                        "{origin}: {}: length {} differs from settings[{j}] (length {len})",
                        at("setting"),
                        entry.setting.len()
                    )))
                }
                Some(_) => {}
            }
            if let Some(j) = entries.iter().position(|e: &SettingEntry| e.setting == entry.setting) {
                return Err(CliError::File(format!(
                    "{origin}: {}: duplicate setting {} (also settings[{j}])",
                    at("setting"),
                    entry.setting
                )));
            }
            entries.push(entry);
        }
        OracleProblem::new(self.name.clone(), family, self.arg_bits, self.value_bits, entries)
            .map_err(|e| CliError::File(format!("{origin}: {e}")))
    }

    /// The file form of an existing problem; settings that equal their own
    /// table are written without an explicit `"setting"`.
    pub fn from_problem(problem: &OracleProblem) -> Self {
        let w = problem.value_bits();
        let settings = problem
            .entries()
            .iter()
            .map(|e| {
                let table: String = e.table.iter().map(|v| format!("{v:0w$b}")).collect();
                SettingFile {
                    setting: (e.setting.to_string() != table).then(|| e.setting.to_string()),
                    table,
                    solution: e.solution.to_string(),
                }
            })
            .collect();
        ProblemFile {
            name: problem.name().to_string(),
            family: Some(problem.family().name().to_string()),
            arg_bits: problem.arg_bits(),
            value_bits: w,
            settings,
        }
    }
}

/// serde_json appends " at line L column C"; the prefix already says so.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

pub fn load(path: &Path) -> Result<OracleProblem, CliError> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::File(format!("{origin}: {e}")))?;
    ProblemFile::from_json(&origin, &text)?.to_problem(&origin)
}

pub fn save(problem: &OracleProblem, path: &Path) -> Result<(), CliError> {
    std::fs::write(path, ProblemFile::from_problem(problem).to_json())
        .map_err(|e| CliError::File(format!("{}: {e}", path.display())))
}
