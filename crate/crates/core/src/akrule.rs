//! The advanced-knowledge rule.
//!
//! The setter's measurement of `B` is split into two partial measurements,
//! GF(2)-linear maps `M1`, `M2` of the setting string. Knowing the outcome of
//! one of them narrows the settings to `σ′ = {b′ ∈ σ : M·b′ = M·b}`. When the
//! two halves are valid (they jointly pin down `b`, share the information
//! evenly, and neither gives away the solution) the rule predicts that the
//! optimal quantum algorithm needs as many queries as a classical solver that
//! knows `σ′` in advance.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::bits::Bits;
use crate::circuits::{grover_iterations, simon_expected_runs};
use crate::gf2::{subsets_of_size, BitMatrix};
use crate::problems::{Family, OracleProblem};
use crate::qcomplexity::{CandidateSet, CqcCache, MAX_CANDIDATES};
use crate::{Error, Result};

/// Setting length up to which every linear map is a candidate.
pub const LINEAR_MAX_BITS: usize = 6;
/// Largest setting set `ak_query_count` accepts.
pub const MAX_AK_SETTINGS: usize = 256;
/// Largest setting set for the exhaustive-partition mode.
pub const MAX_PARTITION_SETTINGS: usize = 8;

/// `σ′ = {b′ ∈ σ : M·b′ = M·b}`.
pub fn advanced_knowledge_set(problem: &OracleProblem, setting: &Bits, map: &BitMatrix) -> Result<CandidateSet> {
    problem.require(setting)?;
    check_cols(problem, map)?;
    let target = map.apply(setting.value());
    let members = problem
        .entries()
        .iter()
        .enumerate()
        .filter(|(_, e)| map.apply(e.setting.value()) == target)
        .map(|(i, _)| i)
        .collect();
    CandidateSet::new(problem, members)
}

fn check_cols(problem: &OracleProblem, map: &BitMatrix) -> Result<()> {
    if map.cols() != problem.setting_len() {
        return Err(Error::DimensionMismatch {
            expected: problem.setting_len(),
            found: map.cols(),
        });
    }
    Ok(())
}

/// Per-criterion outcome of a halving check.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HalvingVerdict {
    /// `σ′₁ ∩ σ′₂ = {b}`.
    pub joint: bool,
    /// The two maps are non-redundant and together read the whole setting:
    /// `rank M1 + rank M2 = rank [M1; M2] = m`.
    pub complementary: bool,
    /// Equal ranks and `|σ′₁| = |σ′₂|` for even `m`; ranks one apart and sizes
    /// within a factor of two for odd `m`.
    pub even: bool,
    /// `{b} ⊊ σ′ᵢ ⊊ σ` for both halves.
    pub nontrivial: bool,
    /// Neither half alone fixes the solution (checked when `σ` has at least
    /// two solutions).
    pub solution_blind: bool,
}

impl HalvingVerdict {
    pub fn is_valid(&self) -> bool {
        self.joint && self.complementary && self.even && self.nontrivial && self.solution_blind
    }

    /// Names of the failed criteria.
    pub fn failures(&self) -> Vec<&'static str> {
        [
            (self.joint, "joint"),
            (self.complementary, "complementary"),
            (self.even, "even"),
            (self.nontrivial, "nontrivial"),
            (self.solution_blind, "solution-blind"),
        ]
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, name)| name)
        .collect()
    }
}

struct Half<'a> {
    rank: usize,
    sigma: &'a CandidateSet,
}

fn verdict(
    problem: &OracleProblem,
    index: usize,
    first: Half<'_>,
    second: Half<'_>,
    stacked_rank: usize,
) -> HalvingVerdict {
    let m = problem.setting_len();
    let n = problem.len();
    let blind_needed = problem.solution_count(0..n) >= 2;
    let half_ok = |s: &CandidateSet| 1 < s.len() && s.len() < n;
    let blind = |s: &CandidateSet| !blind_needed || problem.solution_count(s.members().iter().copied()) >= 2;
    let (k1, k2) = (first.rank, second.rank);
    let (s1, s2) = (first.sigma.len(), second.sigma.len());
    let even = if m.is_multiple_of(2) {
        k1 == k2 && s1 == s2
    } else {
        k1.abs_diff(k2) == 1 && s1.max(s2) <= 2 * s1.min(s2)
    };
    HalvingVerdict {
        joint: intersection_is(first.sigma.members(), second.sigma.members(), index),
        complementary: k1 + k2 == m && stacked_rank == m,
        even,
        nontrivial: half_ok(first.sigma) && half_ok(second.sigma),
        solution_blind: blind(first.sigma) && blind(second.sigma),
    }
}

/// Whether two sorted index lists meet exactly in `{index}`.
fn intersection_is(x: &[usize], y: &[usize], index: usize) -> bool {
    let (mut i, mut j) = (0, 0);
    let mut found = false;
    while i < x.len() && j < y.len() {
        match x[i].cmp(&y[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                if x[i] != index {
                    return false;
                }
                found = true;
                i += 1;
                j += 1;
            }
        }
    }
    found
}

pub fn is_valid_halving(
    problem: &OracleProblem,
    setting: &Bits,
    first: &BitMatrix,
    second: &BitMatrix,
) -> Result<HalvingVerdict> {
    let index = problem.require(setting)?;
    let s1 = advanced_knowledge_set(problem, setting, first)?;
    let s2 = advanced_knowledge_set(problem, setting, second)?;
    Ok(verdict(
        problem,
        index,
        Half {
            rank: first.rank(),
            sigma: &s1,
        },
        Half {
            rank: second.rank(),
            sigma: &s2,
        },
        first.stack(second)?.rank(),
    ))
}

/// Which partial measurements are tried.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generators {
    /// Reading whole fields of the setting: table rows for table-encoded
    /// problems, single bits otherwise.
    Coordinates,
    /// Every subspace of `GF(2)^m`, as canonical row-reduced maps.
    Linear,
}

impl Generators {
    pub fn default_for(problem: &OracleProblem) -> Self {
        if problem.setting_len() <= LINEAR_MAX_BITS {
            Generators::Linear
        } else {
            Generators::Coordinates
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Generators::Coordinates => "coordinates",
            Generators::Linear => "linear",
        }
    }
}

/// Candidate maps, one per distinct row space, in a fixed order.
pub fn candidate_maps(problem: &OracleProblem, generators: Generators) -> Result<Vec<BitMatrix>> {
    let m = problem.setting_len();
    match generators {
        Generators::Linear => {
            if m > LINEAR_MAX_BITS {
                return Err(Error::CapExceeded {
                    what: "setting bits for linear halving enumeration",
                    limit: LINEAR_MAX_BITS,
                    found: m,
                });
            }
            Ok((0..=m).flat_map(|k| BitMatrix::subspaces(m, k)).collect())
        }
        Generators::Coordinates => {
            let w = problem.field_width();
            let fields = m / w;
            if fields > 16 {
                return Err(Error::CapExceeded {
                    what: "setting fields for coordinate halving enumeration",
                    limit: 16,
                    found: fields,
                });
            }
            let mut out = Vec::new();
            for k in 0..=fields {
                for chosen in subsets_of_size(fields, k) {
                    let positions: Vec<usize> = (0..fields)
                        .filter(|f| chosen >> f & 1 == 1)
                        .flat_map(|f| f * w..(f + 1) * w)
                        .collect();
                    out.push(BitMatrix::coordinates(m, &positions));
                }
            }
            Ok(out)
        }
    }
}

/// Two partial measurements of the setting with the sets they leave.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halving {
    pub first: BitMatrix,
    pub second: BitMatrix,
    pub sigma_first: CandidateSet,
    pub sigma_second: CandidateSet,
}

impl Halving {
    /// The same halving with the roles of the two measurements exchanged.
    pub fn swapped(&self) -> Halving {
        Halving {
            first: self.second.clone(),
            second: self.first.clone(),
            sigma_first: self.sigma_second.clone(),
            sigma_second: self.sigma_first.clone(),
        }
    }
}

pub fn enumerate_halvings(problem: &OracleProblem, setting: &Bits) -> Result<Vec<Halving>> {
    enumerate_halvings_with(problem, setting, Generators::default_for(problem))
}

/// All valid halvings for `setting`, one per unordered pair `(σ′₁, σ′₂)`,
/// sorted by that pair.
pub fn enumerate_halvings_with(
    problem: &OracleProblem,
    setting: &Bits,
    generators: Generators,
) -> Result<Vec<Halving>> {
    let maps = candidate_maps(problem, generators)?;
    halvings_from_maps(problem, setting, &maps)
}

struct Candidate {
    map: BitMatrix,
    rank: usize,
    sigma: CandidateSet,
}

fn halvings_from_maps(problem: &OracleProblem, setting: &Bits, maps: &[BitMatrix]) -> Result<Vec<Halving>> {
    let index = problem.require(setting)?;
    let m = problem.setting_len();
    let n = problem.len();
    let blind_needed = problem.solution_count(0..n) >= 2;

    let mut seen = BTreeSet::new();
    let mut by_rank: BTreeMap<usize, Vec<Candidate>> = BTreeMap::new();
    for map in maps {
        let map = map.rref();
        if !seen.insert(map.clone()) {
            continue;
        }
        let sigma = advanced_knowledge_set(problem, setting, &map)?;
        // Halves that fail on their own can be dropped before pairing.
        if sigma.len() <= 1 || sigma.len() >= n {
            continue;
        }
        if blind_needed && problem.solution_count(sigma.members().iter().copied()) < 2 {
            continue;
        }
        by_rank.entry(map.row_count()).or_default().push(Candidate {
            rank: map.row_count(),
            map,
            sigma,
        });
    }

    let mut found: BTreeMap<(CandidateSet, CandidateSet), Halving> = BTreeMap::new();
    let empty = Vec::new();
    for k1 in 0..=m / 2 {
        let k2 = m - k1;
        if k2.abs_diff(k1) > 1 {
            continue;
        }
        let left = by_rank.get(&k1).unwrap_or(&empty);
        let right = by_rank.get(&k2).unwrap_or(&empty);
        for (i, c1) in left.iter().enumerate() {
            let start = if k1 == k2 { i + 1 } else { 0 };
            for c2 in &right[start..] {
                if !intersection_is(c1.sigma.members(), c2.sigma.members(), index) {
                    continue;
                }
                let stacked = c1.map.stack(&c2.map)?.rank();
                let v = verdict(
                    problem,
                    index,
                    Half {
                        rank: c1.rank,
                        sigma: &c1.sigma,
                    },
                    Half {
                        rank: c2.rank,
                        sigma: &c2.sigma,
                    },
                    stacked,
                );
                if !v.is_valid() {
                    continue;
                }
                let (a, b) = if c1.sigma <= c2.sigma { (c1, c2) } else { (c2, c1) };
                let halving = Halving {
                    first: a.map.clone(),
                    second: b.map.clone(),
                    sigma_first: a.sigma.clone(),
                    sigma_second: b.sigma.clone(),
                };
                // Among maps giving the same pair of sets, keep the sparsest,
                // which is a plain coordinate reading whenever one exists.
                let key = (a.sigma.clone(), b.sigma.clone());
                match found.get(&key) {
                    Some(old) if weight(old) <= weight(&halving) => {}
                    _ => {
                        found.insert(key, halving);
                    }
                }
            }
        }
    }
    Ok(found.into_values().collect())
}

fn weight(h: &Halving) -> u32 {
    h.first
        .rows()
        .iter()
        .chain(h.second.rows())
        .map(|r| r.count_ones())
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalvingRecord {
    pub halving: Halving,
    pub cqc_first: u32,
    pub cqc_second: u32,
}

impl HalvingRecord {
    /// Classical cost with either half known in advance, whichever is worse.
    pub fn reduced(&self) -> u32 {
        self.cqc_first.max(self.cqc_second)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SettingRecord {
    pub setting: Bits,
    pub halvings: Vec<HalvingRecord>,
}

impl SettingRecord {
    pub fn worst(&self) -> Option<u32> {
        self.halvings.iter().map(HalvingRecord::reduced).max()
    }

    pub fn best(&self) -> Option<u32> {
        self.halvings.iter().map(HalvingRecord::reduced).min()
    }
}

/// Reference algorithm the prediction is compared with.
#[derive(Clone, Debug, PartialEq)]
pub struct KnownAlgorithm {
    pub name: String,
    /// Query count, expected where the algorithm is probabilistic; `None`
    /// when only an asymptotic bound is known.
    pub queries: Option<f64>,
    pub note: String,
}

impl KnownAlgorithm {
    pub fn for_problem(problem: &OracleProblem) -> Self {
        let n = problem.arg_bits();
        let (name, queries, note) = match problem.family() {
            Family::Grover => (
                "Grover search",
                Some(grover_iterations(n) as f64),
                "one query per amplitude-amplification iteration",
            ),
            Family::DeutschJozsa => ("Deutsch-Jozsa", Some(1.0), "a single oracle call"),
            Family::Simon => (
                "Simon",
                Some(simon_expected_runs(n)),
                "expected runs of one query each until n-1 independent equations",
            ),
            Family::Periodic => ("period finding", None, "Poly(n) queries"),
            Family::Custom => ("none", None, "no reference algorithm"),
        };
        KnownAlgorithm {
            name: name.to_string(),
            queries,
            note: note.to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Matches,
    /// The known algorithm uses more queries than predicted.
    KnownSuboptimal,
    PredictionExceedsKnown,
    Incomparable,
}

impl Comparison {
    pub fn label(self) -> &'static str {
        match self {
            Comparison::Matches => "matches known algorithm",
            Comparison::KnownSuboptimal => "known algorithm suboptimal per AK rule",
            Comparison::PredictionExceedsKnown => "prediction exceeds known algorithm",
            Comparison::Incomparable => "no numeric comparison",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AkReport {
    pub problem: String,
    pub generators: Generators,
    pub settings: Vec<SettingRecord>,
    /// Classical complexity of the unreduced problem; `None` above the
    /// minimax cap.
    pub classical_baseline: Option<u32>,
    /// Worst case over settings and their valid halvings; `None` when no
    /// setting has a valid halving.
    pub predicted_quantum_queries: Option<u32>,
    /// Best case over settings and halvings, for diagnostics.
    pub predicted_min: Option<u32>,
    pub known: KnownAlgorithm,
}

impl AkReport {
    pub fn is_inconclusive(&self) -> bool {
        self.predicted_quantum_queries.is_none()
    }

    pub fn settings_without_halvings(&self) -> impl Iterator<Item = &Bits> {
        self.settings
            .iter()
            .filter(|s| s.halvings.is_empty())
            .map(|s| &s.setting)
    }

    pub fn comparison(&self) -> Comparison {
        match (self.predicted_quantum_queries, self.known.queries) {
            (Some(p), Some(k)) => {
                let p = p as f64;
                if (p - k).abs() < 1e-9 {
                    Comparison::Matches
                } else if k > p {
                    Comparison::KnownSuboptimal
                } else {
                    Comparison::PredictionExceedsKnown
                }
            }
            _ => Comparison::Incomparable,
        }
    }
}

pub fn ak_query_count(problem: &OracleProblem) -> Result<AkReport> {
    ak_query_count_with(problem, Generators::default_for(problem))
}

pub fn ak_query_count_with(problem: &OracleProblem, generators: Generators) -> Result<AkReport> {
    if problem.len() > MAX_AK_SETTINGS {
        return Err(Error::CapExceeded {
            what: "settings for the AK report",
            limit: MAX_AK_SETTINGS,
            found: problem.len(),
        });
    }
    let maps = candidate_maps(problem, generators)?;
    let mut cache = CqcCache::new(problem);
    let mut settings = Vec::with_capacity(problem.len());
    for setting in problem.settings() {
        let halvings = halvings_from_maps(problem, &setting, &maps)?
            .into_iter()
            .map(|halving| {
                Ok(HalvingRecord {
                    cqc_first: cache.get(&halving.sigma_first)?,
                    cqc_second: cache.get(&halving.sigma_second)?,
                    halving,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        settings.push(SettingRecord { setting, halvings });
    }
    let classical_baseline = if problem.len() <= MAX_CANDIDATES {
        Some(cache.get(&CandidateSet::full(problem))?)
    } else {
        None
    };
    Ok(AkReport {
        problem: problem.name().to_string(),
        generators,
        classical_baseline,
        predicted_quantum_queries: settings.iter().filter_map(SettingRecord::worst).max(),
        predicted_min: settings.iter().filter_map(SettingRecord::best).min(),
        settings,
        known: KnownAlgorithm::for_problem(problem),
    })
}

/// A pair of blocks containing `b`, from two balanced partitions of `σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionHalving {
    pub sigma_first: CandidateSet,
    pub sigma_second: CandidateSet,
    pub cqc_first: u32,
    pub cqc_second: u32,
}

/// Experimental: halvings over arbitrary balanced partitions of `σ` rather
/// than linear maps of the setting string.
///
/// A pair of blocks `(S1, S2)` around `b` is kept when both sizes divide
/// `|σ|`, `|S1|·|S2| = |σ|`, `S1 ∩ S2 = {b}`, both are nontrivial and
/// solution-blind, and the sizes are equal (within a factor two when `|σ|`
/// is not a perfect square).
pub fn enumerate_partition_halvings(problem: &OracleProblem, setting: &Bits) -> Result<Vec<PartitionHalving>> {
    let n = problem.len();
    if n > MAX_PARTITION_SETTINGS {
        return Err(Error::CapExceeded {
            what: "settings for exhaustive partitions",
            limit: MAX_PARTITION_SETTINGS,
            found: n,
        });
    }
    let index = problem.require(setting)?;
    let blind_needed = problem.solution_count(0..n) >= 2;
    let root = libm::sqrt(n as f64) as usize;
    let square = root * root == n || (root + 1) * (root + 1) == n;
    let blocks: Vec<CandidateSet> = (0u64..1 << n)
        .filter(|mask| mask >> index & 1 == 1)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|m| 1 < m.len() && m.len() < n && n.is_multiple_of(m.len()))
        .filter(|m| !blind_needed || problem.solution_count(m.iter().copied()) >= 2)
        .map(|m| CandidateSet::new(problem, m))
        .collect::<Result<_>>()?;
    let mut cache = CqcCache::new(problem);
    let mut out = Vec::new();
    for (i, s1) in blocks.iter().enumerate() {
        for s2 in &blocks[i + 1..] {
            let (a, b) = (s1.len(), s2.len());
            let even = if square { a == b } else { a.max(b) <= 2 * a.min(b) };
            if a * b != n || !even || !intersection_is(s1.members(), s2.members(), index) {
                continue;
            }
            out.push(PartitionHalving {
                cqc_first: cache.get(s1)?,
                cqc_second: cache.get(s2)?,
                sigma_first: s1.clone(),
                sigma_second: s2.clone(),
            });
        }
    }
    Ok(out)
}
