//! Report documents: what each command prints.
//!
//! Every report is a plain serializable value; the text form is rendered
//! from that value alone, so text rebuilt from parsed JSON is identical to
//! the text printed directly.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub schema: u32,
    #[serde(flatten)]
    pub report: Report,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Report {
    Simulate(SimulateReport),
    Zigzag(ZigzagReport),
    AkReport(AkReport),
    Complexity(ComplexityReport),
    ListProblems(ProblemList),
}

impl Document {
    pub fn new(report: Report) -> Self {
        Document { schema: SCHEMA, report }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        match &self.report {
            Report::Simulate(r) => r.to_text(),
            Report::Zigzag(r) => r.to_text(),
            Report::AkReport(r) => r.to_text(),
            Report::Complexity(r) => r.to_text(),
            Report::ListProblems(r) => r.to_text(),
        }
    }
}

/// Probabilities are reported to twelve decimals so that exact values
/// print as `1` rather than `0.9999999999999998`.
pub fn round_probability(p: f64) -> f64 {
    let r = (p * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn number(x: f64) -> String {
    if (x - x.round()).abs() < 1e-9 {
        format!("{}", x.round() as i64)
    } else {
        format!("{x:.3}")
    }
}

fn opt<T: ToString>(x: &Option<T>, none: &str) -> String {
    x.as_ref().map_or(none.to_string(), |v| v.to_string())
}

fn set(items: &[String]) -> String {
    format!("{{{}}}", items.join(", "))
}

/// Left-aligned columns separated by two spaces.
fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let header: Vec<String> = headers.iter().map(|h| h.to_string()).collect();
    for row in std::iter::once(&header).chain(rows) {
        let mut line = String::new();
        for (i, (cell, w)) in row.iter().zip(&widths).enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(cell);
            line.extend(std::iter::repeat_n(' ', w - cell.chars().count()));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub label: String,
    pub state: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Probability {
    pub value: String,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateReport {
    pub problem: String,
    pub algorithm: String,
    pub setting: String,
    /// `"given"` or `"random"`.
    pub selection: String,
    pub seed: u64,
    pub queries: usize,
    pub stages: Vec<Stage>,
    pub final_register: String,
    pub distribution: Vec<Probability>,
    pub final_outcome: String,
    pub probability: f64,
    pub decoded: Option<String>,
}

impl SimulateReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let plural = if self.queries == 1 { "query" } else { "queries" };
        writeln!(
            out,
            "simulate {} with {} ({} {plural})",
            self.problem, self.algorithm, self.queries
        )
        .unwrap();
        writeln!(
            out,
            "setting b = {} ({}, seed {})",
            self.setting, self.selection, self.seed
        )
        .unwrap();
        out.push('\n');
        let rows: Vec<Vec<String>> = self
            .stages
            .iter()
            .map(|s| vec![s.label.clone(), s.state.clone()])
            .collect();
        out.push_str(&table(&["stage", "state"], &rows));
        out.push('\n');
        writeln!(out, "distribution of {}:", self.final_register).unwrap();
        let rows: Vec<Vec<String>> = self
            .distribution
            .iter()
            .map(|p| vec![p.value.clone(), p.probability.to_string()])
            .collect();
        out.push_str(&table(&["value", "probability"], &rows));
        out.push('\n');
        writeln!(
            out,
            "outcome {} = {} with probability {}",
            self.final_register, self.final_outcome, self.probability
        )
        .unwrap();
        match &self.decoded {
            Some(d) => writeln!(out, "decoded solution: {d}").unwrap(),
            None => writeln!(out, "decoded solution: none (sample for classical post-processing)").unwrap(),
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalvingEntry {
    pub initial: String,
    pub initial_map: String,
    #[serde(rename = "final")]
    pub final_measurement: String,
    pub final_map: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub sigma_prime: Vec<String>,
    pub halvings: Vec<HalvingEntry>,
    pub final_outcome: String,
    pub probability: f64,
    pub input: String,
    pub output: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub measurement: String,
    pub map: String,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZigzagReport {
    pub problem: String,
    pub algorithm: String,
    pub setting: String,
    pub seed: u64,
    pub final_register: String,
    pub instances: Vec<Instance>,
    pub reconstruction: Vec<Residual>,
}

impl ZigzagReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "zigzag {} with {}, setting b = {}, final measurement on {}",
            self.problem, self.algorithm, self.setting, self.final_register
        )
        .unwrap();
        let plural = if self.instances.len() == 1 {
            "instance"
        } else {
            "instances"
        };
        writeln!(out, "{} {plural}", self.instances.len()).unwrap();
        for (i, inst) in self.instances.iter().enumerate() {
            out.push('\n');
            writeln!(out, "instance {}: σ′ = {}", i + 1, set(&inst.sigma_prime)).unwrap();
            for h in &inst.halvings {
                writeln!(
                    out,
                    "  initial {} {}, final {} {}",
                    h.initial, h.initial_map, h.final_measurement, h.final_map
                )
                .unwrap();
            }
            writeln!(
                out,
                "  final outcome {} with probability {}",
                inst.final_outcome, inst.probability
            )
            .unwrap();
            writeln!(out, "  input:  {}", inst.input).unwrap();
            writeln!(out, "  output: {}", inst.output).unwrap();
        }
        if !self.reconstruction.is_empty() {
            out.push('\n');
            writeln!(
                out,
                "reconstruction of Û|ψ⟩ from all outcomes of each final measurement:"
            )
            .unwrap();
            let rows: Vec<Vec<String>> = self
                .reconstruction
                .iter()
                .map(|r| vec![r.measurement.clone(), r.map.clone(), format!("{:.1e}", r.residual)])
                .collect();
            out.push_str(&table(&["measurement", "map", "residual"], &rows));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalvingRow {
    pub first: String,
    pub second: String,
    pub sigma_first: Vec<String>,
    pub sigma_second: Vec<String>,
    pub cqc_first: u32,
    pub cqc_second: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettingRow {
    pub setting: String,
    pub worst: Option<u32>,
    pub best: Option<u32>,
    pub halvings: Vec<HalvingRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Known {
    pub name: String,
    pub queries: Option<f64>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionRow {
    pub setting: String,
    pub halvings: Vec<HalvingRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionSection {
    pub predicted: Option<u32>,
    pub settings: Vec<PartitionRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AkReport {
    pub problem: String,
    pub generators: String,
    pub settings_count: usize,
    pub classical_baseline: Option<u32>,
    pub predicted: Option<u32>,
    pub predicted_min: Option<u32>,
    pub known: Known,
    pub comparison: String,
    pub settings: Vec<SettingRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<PartitionSection>,
}

fn halving_lines(out: &mut String, rows: &[HalvingRow]) {
    for h in rows {
        let maps = if h.first.is_empty() {
            String::new()
        } else {
            format!("{} | {}  ", h.first, h.second)
        };
        writeln!(
            out,
            "  {maps}σ′₁ = {} (cqc {}), σ′₂ = {} (cqc {})",
            set(&h.sigma_first),
            h.cqc_first,
            set(&h.sigma_second),
            h.cqc_second
        )
        .unwrap();
    }
}

impl AkReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "AK report for {} ({} halvings)", self.problem, self.generators).unwrap();
        let summary = vec![
            vec!["settings".to_string(), self.settings_count.to_string()],
            vec![
                "classical baseline".to_string(),
                opt(&self.classical_baseline, "above cap"),
            ],
            vec![
                "predicted quantum queries".to_string(),
                opt(&self.predicted, "inconclusive"),
            ],
            vec![
                "best case over halvings".to_string(),
                opt(&self.predicted_min, "inconclusive"),
            ],
            vec![
                "known algorithm".to_string(),
                format!(
                    "{}: {} ({})",
                    self.known.name,
                    self.known.queries.map_or("-".to_string(), number),
                    self.known.note
                ),
            ],
            vec!["comparison".to_string(), self.comparison.clone()],
        ];
        out.push_str(&table(&["quantity", "value"], &summary));
        out.push('\n');
        let rows: Vec<Vec<String>> = self
            .settings
            .iter()
            .map(|s| {
                vec![
                    s.setting.clone(),
                    s.halvings.len().to_string(),
                    opt(&s.worst, "-"),
                    opt(&s.best, "-"),
                ]
            })
            .collect();
        out.push_str(&table(&["setting", "halvings", "worst", "best"], &rows));
        for s in self.settings.iter().filter(|s| !s.halvings.is_empty()) {
            out.push('\n');
            writeln!(out, "b = {}:", s.setting).unwrap();
            halving_lines(&mut out, &s.halvings);
        }
        if let Some(p) = &self.partition {
            out.push('\n');
            writeln!(
                out,
                "exhaustive partition halvings (experimental): predicted {}",
                opt(&p.predicted, "inconclusive")
            )
            .unwrap();
            for s in &p.settings {
                writeln!(out, "b = {}: {} halvings", s.setting, s.halvings.len()).unwrap();
                halving_lines(&mut out, &s.halvings);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub query: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub branches: Vec<Branch>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub value: String,
    pub next: Tree,
}

impl Tree {
    fn render(&self, indent: usize, out: &mut String) {
        if let Some(s) = &self.solution {
            writeln!(out, "{:indent$}=> {s}", "").unwrap();
        }
        if let Some(a) = &self.query {
            writeln!(out, "{:indent$}query a={a}", "").unwrap();
            for b in &self.branches {
                writeln!(out, "{:indent$}  f={}:", "", b.value).unwrap();
                b.next.render(indent + 4, out);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub problem: String,
    pub candidates: Vec<String>,
    pub cqc: u32,
    pub tree: Tree,
}

impl ComplexityReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "classical query complexity of {} on {} settings: {}",
            self.problem,
            self.candidates.len(),
            self.cqc
        )
        .unwrap();
        writeln!(out, "candidates: {}", set(&self.candidates)).unwrap();
        out.push('\n');
        writeln!(out, "worst-case optimal decision tree:").unwrap();
        self.tree.render(2, &mut out);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemInfo {
    pub name: String,
    pub sizes: String,
    pub circuit: String,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemList {
    pub problems: Vec<ProblemInfo>,
}

impl ProblemList {
    pub fn to_text(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .problems
            .iter()
            .map(|p| {
                vec![
                    p.name.clone(),
                    p.sizes.clone(),
                    p.circuit.clone(),
                    p.description.clone(),
                ]
            })
            .collect();
        table(&["name", "n", "circuit", "description"], &rows)
    }
}
