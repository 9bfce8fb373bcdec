//! Oracle problems: a finite family of functions `f_b`, indexed by setting
//! strings `b`, with a solution label `s(b)` for each.
//!
//! Every setting carries its full function table, so evaluation is a lookup.
//! For the table-encoded families (Deutsch-Jozsa, Simon, periodic) the setting
//! string *is* the table, value of `a = 0` first.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::bits::{mask, Bits};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Grover,
    DeutschJozsa,
    Simon,
    Periodic,
    Custom,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Grover => "grover",
            Family::DeutschJozsa => "dj",
            Family::Simon => "simon",
            Family::Periodic => "periodic",
            Family::Custom => "custom",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SettingEntry {
    pub setting: Bits,
    pub table: Vec<u64>,
    pub solution: Bits,
}

impl SettingEntry {
    /// An entry whose setting string is its own concatenated table.
    pub fn tabled(table: Vec<u64>, value_bits: usize, solution: Bits) -> Result<Self> {
        let setting = Bits::from_fields(&table, value_bits)?;
        Ok(SettingEntry {
            setting,
            table,
            solution,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleProblem {
    name: String,
    family: Family,
    arg_bits: usize,
    value_bits: usize,
    entries: Vec<SettingEntry>,
}

impl OracleProblem {
    /// Validates and wraps a list of settings.
    ///
    /// Settings must share one length, be distinct, and have distinct tables
    /// of `2^arg_bits` values below `2^value_bits`; solutions must share one
    /// length.
    pub fn new(
        name: impl Into<String>,
        family: Family,
        arg_bits: usize,
        value_bits: usize,
        entries: Vec<SettingEntry>,
    ) -> Result<Self> {
        let name = name.into();
        if arg_bits == 0 || arg_bits > 16 {
            return Err(Error::InvalidProblem(format!(
                "arg_bits must be in 1..=16, got {arg_bits}"
            )));
        }
        if value_bits == 0 || value_bits > 32 {
            return Err(Error::InvalidProblem(format!(
                "value_bits must be in 1..=32, got {value_bits}"
            )));
        }
        let first = entries
            .first()
            .ok_or_else(|| Error::InvalidProblem("no settings".to_string()))?;
        let (setting_len, solution_len) = (first.setting.len(), first.solution.len());
        if setting_len == 0 {
            return Err(Error::InvalidProblem(
                "settings must be nonempty bit-strings".to_string(),
            ));
        }
        let rows = 1usize << arg_bits;
        let mut seen_settings = BTreeSet::new();
        let mut seen_tables = BTreeSet::new();
        for (i, e) in entries.iter().enumerate() {
            if e.setting.len() != setting_len {
                return Err(Error::InvalidProblem(format!(
                    "setting {} has length {}, expected {setting_len}",
                    e.setting,
                    e.setting.len()
                )));
            }
            if e.solution.len() != solution_len {
                return Err(Error::InvalidProblem(format!(
                    "solution {} of setting {} has length {}, expected {solution_len}",
                    e.solution,
                    e.setting,
                    e.solution.len()
                )));
            }
            if e.table.len() != rows {
                return Err(Error::InvalidProblem(format!(
                    "table of setting {} has {} values, expected {rows}",
                    e.setting,
                    e.table.len()
                )));
            }
            if let Some(v) = e.table.iter().find(|&&v| v > mask(value_bits)) {
                return Err(Error::InvalidProblem(format!(
                    "table of setting {} has value {v} wider than {value_bits} bits",
                    e.setting
                )));
            }
            if !seen_settings.insert(e.setting) {
                return Err(Error::DuplicateSetting(e.setting.to_string()));
            }
            if !seen_tables.insert(&e.table) {
                return Err(Error::InvalidProblem(format!(
                    "setting {} (entry {i}) repeats the table of an earlier setting",
                    e.setting
                )));
            }
        }
        Ok(OracleProblem {
            name,
            family,
            arg_bits,
            value_bits,
            entries,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn arg_bits(&self) -> usize {
        self.arg_bits
    }

    pub fn value_bits(&self) -> usize {
        self.value_bits
    }

    pub fn setting_len(&self) -> usize {
        self.entries[0].setting.len()
    }

    pub fn solution_len(&self) -> usize {
        self.entries[0].solution.len()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[SettingEntry] {
        &self.entries
    }

    pub fn settings(&self) -> impl Iterator<Item = Bits> + '_ {
        self.entries.iter().map(|e| e.setting)
    }

    pub fn index_of(&self, setting: &Bits) -> Option<usize> {
        self.entries.iter().position(|e| &e.setting == setting)
    }

    pub fn require(&self, setting: &Bits) -> Result<usize> {
        self.index_of(setting)
            .ok_or_else(|| Error::UnknownSetting(setting.to_string()))
    }

    /// `f_b(a)` for the setting at `index`.
    pub fn value(&self, index: usize, a: u64) -> u64 {
        self.entries[index].table[a as usize]
    }

    pub fn eval(&self, setting: &Bits, a: &Bits) -> Result<Bits> {
        let i = self.require(setting)?;
        if a.len() != self.arg_bits {
            return Err(Error::InvalidBits(format!(
                "argument {a} for {} argument bits",
                self.arg_bits
            )));
        }
        Ok(Bits::of(self.value(i, a.value()), self.value_bits))
    }

    pub fn solution(&self, setting: &Bits) -> Result<Bits> {
        Ok(self.entries[self.require(setting)?].solution)
    }

    /// Whether every setting string equals its concatenated table.
    pub fn is_table_encoded(&self) -> bool {
        self.entries.iter().all(|e| {
            self.setting_len() == self.value_bits << self.arg_bits
                && Bits::from_fields(&e.table, self.value_bits).is_ok_and(|t| t == e.setting)
        })
    }

    /// Width of the smallest meaningful group of setting bits: one table row
    /// for table-encoded problems, a single bit otherwise.
    pub fn field_width(&self) -> usize {
        if self.is_table_encoded() {
            self.value_bits
        } else {
            1
        }
    }

    /// Number of distinct solution labels among the given setting indices.
    pub fn solution_count(&self, members: impl IntoIterator<Item = usize>) -> usize {
        members
            .into_iter()
            .map(|i| self.entries[i].solution)
            .collect::<BTreeSet<_>>()
            .len()
    }
}

/// Unstructured search: `f_b(a) = 1` iff `a = b`, and `s(b) = b`.
pub fn grover(n: usize) -> Result<OracleProblem> {
    if !(1..=10).contains(&n) {
        return Err(Error::ProblemOutOfRange {
            family: "grover",
            allowed: "1..=10",
            n,
        });
    }
    let entries = (0..1u64 << n)
        .map(|b| SettingEntry {
            setting: Bits::of(b, n),
            table: (0..1u64 << n).map(|a| u64::from(a == b)).collect(),
            solution: Bits::of(b, n),
        })
        .collect();
    OracleProblem::new(format!("grover-{n}"), Family::Grover, n, 1, entries)
}

/// Constant or balanced boolean functions; solution `0` for constant, `1`
/// for balanced. The two constants come first, then balanced tables in
/// increasing order.
pub fn deutsch_jozsa(n: usize) -> Result<OracleProblem> {
    if !(1..=4).contains(&n) {
        return Err(Error::ProblemOutOfRange {
            family: "dj",
            allowed: "1..=4",
            n,
        });
    }
    let rows = 1usize << n;
    let full = mask(rows);
    let mut tables: Vec<(u64, u64)> = alloc::vec![(0, 0), (full, 0)];
    tables.extend(
        (0..=full)
            .filter(|t| t.count_ones() as usize == rows / 2)
            .map(|t| (t, 1)),
    );
    let entries = tables
        .into_iter()
        .map(|(t, s)| {
            let table = Bits::of(t, rows);
            SettingEntry::tabled((0..rows).map(|a| u64::from(table.bit(a))).collect(), 1, Bits::of(s, 1))
        })
        .collect::<Result<_>>()?;
    OracleProblem::new(format!("dj-{n}"), Family::DeutschJozsa, n, 1, entries)
}

/// Two-to-one functions `{0,1}^n → {0,1}^(n-1)` with `f(a) = f(c)` iff
/// `c ∈ {a, a ⊕ p}` for a nonzero period `p`, which is the solution.
pub fn simon(n: usize) -> Result<OracleProblem> {
    if !(2..=3).contains(&n) {
        return Err(Error::ProblemOutOfRange {
            family: "simon",
            allowed: "2..=3",
            n,
        });
    }
    let rows = 1usize << n;
    let w = n - 1;
    let mut entries = Vec::new();
    for code in 0u64..1 << (rows * w) {
        let table: Vec<u64> = (0..rows).map(|a| Bits::of(code, rows * w).field(a, w)).collect();
        if let Some(p) = xor_period(&table) {
            entries.push(SettingEntry::tabled(table, w, Bits::of(p, n))?);
        }
    }
    OracleProblem::new(format!("simon-{n}"), Family::Simon, n, w, entries)
}

fn xor_period(table: &[u64]) -> Option<u64> {
    let mut period = None;
    for (a, fa) in table.iter().enumerate() {
        let mut partners = table.iter().enumerate().filter(|&(c, fc)| c != a && fc == fa);
        let (c, _) = partners.next()?;
        if partners.next().is_some() {
            return None;
        }
        let p = (a ^ c) as u64;
        match period {
            None => period = Some(p),
            Some(q) if q != p => return None,
            Some(_) => {}
        }
    }
    period
}

/// Shifted remainders `f(a) = (a + t) mod r` for `r ∈ {2, 4}`, `t < r`, over
/// 3-bit arguments; the solution is `r`.
pub fn periodic(n: usize) -> Result<OracleProblem> {
    if n != 3 {
        return Err(Error::ProblemOutOfRange {
            family: "periodic",
            allowed: "3",
            n,
        });
    }
    let mut entries = Vec::new();
    for r in [2u64, 4] {
        for t in 0..r {
            let table = (0..8).map(|a| (a + t) % r).collect();
            entries.push(SettingEntry::tabled(table, 2, Bits::of(r, n))?);
        }
    }
    OracleProblem::new("periodic-3", Family::Periodic, n, 2, entries)
}

/// Looks up a built-in family by its short name.
pub fn builtin(name: &str, n: usize) -> Result<OracleProblem> {
    match name {
        "grover" => grover(n),
        "dj" | "deutsch-jozsa" => deutsch_jozsa(n),
        "simon" => simon(n),
        "periodic" => periodic(n),
        other => Err(Error::InvalidProblem(format!("unknown built-in problem {other:?}"))),
    }
}

/// Built-in names with the sizes they accept.
pub const BUILTINS: &[(&str, &str)] = &[
    ("grover", "1..=10"),
    ("dj", "1..=4"),
    ("simon", "2..=3"),
    ("periodic", "3"),
];
