//! Time-symmetrization instances.
//!
//! An instance is built by a zigzag through the solver's unitary: run `Û`
//! forward on the unprojected input, keep only the final partial-measurement
//! outcome consistent with the selected setting, and run `Û†` back. What
//! comes out is a superposition over the reduced setting set `σ′` that `Û`
//! maps onto the post-selected output. The initial partial measurement's
//! projection is postponed past the diagram.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::akrule::{self, Generators, HalvingVerdict};
use crate::bits::Bits;
use crate::circuits::{alice_input, sharp_input, Circuit, ARGUMENT, SETTING};
use crate::gf2::BitMatrix;
use crate::problems::OracleProblem;
use crate::qcomplexity::CandidateSet;
use crate::statevec::State;
use crate::{Error, Result, TOLERANCE};

/// A coarse-grained measurement reading `M·x` of a register's content.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialMeasurement {
    target: String,
    matrix: BitMatrix,
    description: String,
}

impl PartialMeasurement {
    pub fn new(problem: &OracleProblem, target: &str, matrix: BitMatrix) -> Result<Self> {
        if !matrix.has_independent_rows() {
            return Err(Error::DependentRows);
        }
        if matrix.cols() != problem.setting_len() {
            return Err(Error::DimensionMismatch {
                expected: problem.setting_len(),
                found: matrix.cols(),
            });
        }
        Ok(PartialMeasurement {
            target: target.to_string(),
            description: describe(problem, &matrix),
            matrix,
        })
    }

    pub fn target(&self) -> &str {
        &self.target
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    pub fn description(&self) -> &str {
        &self.description
    }
}

/// A short human name for a map of setting strings.
pub fn describe(problem: &OracleProblem, matrix: &BitMatrix) -> String {
    let m = matrix.cols();
    let rows = matrix.rows();
    if rows.is_empty() {
        return "nothing".to_string();
    }
    let units: Option<Vec<usize>> = rows
        .iter()
        .map(|r| (r.count_ones() == 1).then(|| m - 1 - r.trailing_zeros() as usize))
        .collect();
    let Some(mut positions) = units else {
        if rows.len() == 1 && rows[0].count_ones() as usize == m {
            return "parity".to_string();
        }
        return alloc::format!("map {matrix}");
    };
    positions.sort_unstable();
    let w = problem.field_width();
    if problem.is_table_encoded() {
        let fields: Vec<usize> = positions
            .iter()
            .map(|p| p / w)
            .collect::<alloc::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        if fields.len() * w == positions.len() {
            let names: Vec<String> = fields
                .iter()
                .map(|&f| Bits::of(f as u64, problem.arg_bits()).to_string())
                .collect();
            return alloc::format!("rows a={}", names.join(","));
        }
    }
    match (m, positions.as_slice()) {
        (2, [0]) => "left bit".to_string(),
        (2, [1]) => "right bit".to_string(),
        _ => {
            let names: Vec<String> = positions.iter().map(|p| p.to_string()).collect();
            alloc::format!("bits {}", names.join(","))
        }
    }
}

/// Register the final partial measurement is applied to.
///
/// When `Û` sends every `|b⟩|0…⟩` exactly to `|b⟩|b⟩…` the setting can be
/// read from `A` and the final measurement acts there. Otherwise it acts on
/// `B`, which `Û` leaves untouched, so measuring it after `Û` is the same as
/// measuring it before.
pub fn final_register(problem: &OracleProblem, circuit: &Circuit) -> Result<&'static str> {
    let same_width = problem.arg_bits() == problem.setting_len();
    if !same_width || problem.entries().iter().any(|e| e.solution != e.setting) {
        return Ok(SETTING);
    }
    for s in problem.settings() {
        let out = sharp_input(problem, circuit.layout(), &s)?.apply(&circuit.unitary)?;
        let mut labels = sharp_labels(&out, &s);
        labels[out.layout().position(ARGUMENT)?] = s;
        if (out.amplitude(&labels)?.norm() - 1.0).abs() > TOLERANCE {
            return Ok(SETTING);
        }
    }
    Ok(ARGUMENT)
}

fn sharp_labels(state: &State, setting: &Bits) -> Vec<Bits> {
    let mut labels = alloc::vec![*setting];
    labels.extend(state.layout().registers()[1..].iter().map(|r| Bits::zero(r.width())));
    labels
}

/// An initial measurement on `B` and a final one, with their check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halving {
    pub initial: PartialMeasurement,
    pub final_measurement: PartialMeasurement,
    pub verdict: HalvingVerdict,
}

impl Halving {
    pub fn new(
        problem: &OracleProblem,
        circuit: &Circuit,
        setting: &Bits,
        initial: BitMatrix,
        last: BitMatrix,
    ) -> Result<Self> {
        let verdict = akrule::is_valid_halving(problem, setting, &initial, &last)?;
        Ok(Halving {
            initial: PartialMeasurement::new(problem, SETTING, initial)?,
            final_measurement: PartialMeasurement::new(problem, final_register(problem, circuit)?, last)?,
            verdict,
        })
    }
}

#[derive(Clone, Debug)]
pub struct TimeSymInstance {
    pub setting: Bits,
    /// Every halving whose final measurement leads to this `σ′`.
    pub halvings: Vec<Halving>,
    pub sigma_prime: CandidateSet,
    pub final_outcome: Bits,
    /// Born probability of `final_outcome` on the unprojected output.
    pub probability: f64,
    pub input_state: State,
    pub output_state: State,
}

impl TimeSymInstance {
    pub fn sigma_settings(&self, problem: &OracleProblem) -> Vec<Bits> {
        self.sigma_prime.settings(problem).collect()
    }

    /// The output after the postponed projection of the initial partial
    /// measurement of the halving at `which`.
    pub fn deferred_projection(&self, which: usize) -> Result<State> {
        let initial = &self.halvings[which].initial;
        let m = initial.matrix();
        let v = m.apply(self.setting.value());
        self.output_state
            .project_where(initial.target(), |x| m.apply(x) == v)?
            .normalized()
    }
}

/// Runs one zigzag for `setting` with the given halving.
pub fn zigzag_instance(
    problem: &OracleProblem,
    circuit: &Circuit,
    halving: &Halving,
    setting: &Bits,
) -> Result<TimeSymInstance> {
    problem.require(setting)?;
    if !halving.verdict.is_valid() {
        return Err(Error::InvalidHalving(alloc::format!(
            "{} / {} fails {}",
            halving.initial.description(),
            halving.final_measurement.description(),
            halving.verdict.failures().join(", ")
        )));
    }
    let fin = &halving.final_measurement;
    let m = fin.matrix();
    let v = m.apply(setting.value());
    let output = alice_input(problem, circuit.layout())?.apply(&circuit.unitary)?;
    let kept = output.project_where(fin.target(), |x| m.apply(x) == v)?;
    let probability = kept.norm() * kept.norm();
    if probability <= TOLERANCE * TOLERANCE {
        return Err(Error::ZeroProbability(alloc::format!(
            "{} = {}",
            fin.description(),
            Bits::of(v, m.row_count())
        )));
    }
    let input_state = kept.apply_adjoint(&circuit.unitary)?.normalized()?;
    let output_state = input_state.apply(&circuit.unitary)?;
    let support = input_state.register_support(SETTING, TOLERANCE)?;
    let sigma_prime = CandidateSet::from_settings(problem, &support)?;
    Ok(TimeSymInstance {
        setting: *setting,
        halvings: alloc::vec![halving.clone()],
        sigma_prime,
        final_outcome: Bits::of(v, m.row_count()),
        probability,
        input_state,
        output_state,
    })
}

pub fn enumerate_instances(problem: &OracleProblem, circuit: &Circuit, setting: &Bits) -> Result<Vec<TimeSymInstance>> {
    enumerate_instances_with(problem, circuit, setting, Generators::default_for(problem))
}

/// One instance per distinct `σ′` over all valid halvings, each halving
/// taken in both orders; sorted by `σ′`.
pub fn enumerate_instances_with(
    problem: &OracleProblem,
    circuit: &Circuit,
    setting: &Bits,
    generators: Generators,
) -> Result<Vec<TimeSymInstance>> {
    let mut out: Vec<TimeSymInstance> = Vec::new();
    for h in akrule::enumerate_halvings_with(problem, setting, generators)? {
        for oriented in [h.clone(), h.swapped()] {
            let halving = Halving::new(problem, circuit, setting, oriented.first, oriented.second)?;
            match out.iter_mut().find(|i| i.sigma_prime == oriented.sigma_second) {
                Some(existing) => existing.halvings.push(halving),
                None => out.push(zigzag_instance(problem, circuit, &halving, setting)?),
            }
        }
    }
    out.sort_by(|a, b| a.sigma_prime.cmp(&b.sigma_prime));
    Ok(out)
}

/// Distance between the unprojected input and the sum of the zigzag inputs
/// over every outcome of `last`, each weighted by the square root of its
/// probability.
pub fn reconstruct_check(problem: &OracleProblem, circuit: &Circuit, last: &PartialMeasurement) -> Result<f64> {
    let input = alice_input(problem, circuit.layout())?;
    let output = input.apply(&circuit.unitary)?;
    let m = last.matrix();
    let mut sum = State::zero(circuit.layout().clone());
    for (value, _) in output.partial_distribution(last.target(), m)? {
        let kept = output.project_where(last.target(), |x| m.apply(x) == value.value())?;
        sum = sum.add(&kept.apply_adjoint(&circuit.unitary)?)?;
    }
    sum.normalized()?.distance_up_to_phase(&input)
}
