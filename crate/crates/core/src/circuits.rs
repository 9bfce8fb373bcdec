//! Setter/solver circuits on the `B ⊗ A (⊗ V)` layout.
//!
//! Grover and Deutsch-Jozsa use the phase-oracle convention, so they need no
//! value register. Simon's circuit and the periodic family use an XOR oracle
//! into a value register `V`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::bits::Bits;
use crate::gf2::BitMatrix;
use crate::problems::{Family, OracleProblem};
use crate::statevec::{Gate, OracleTable, RegisterLayout, State, Unitary, DEFAULT_MAX_BITS};
use crate::{Error, Result};

pub const SETTING: &str = "B";
pub const ARGUMENT: &str = "A";
pub const VALUE: &str = "V";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgorithmKind {
    Grover,
    DeutschJozsa,
    Simon,
}

impl AlgorithmKind {
    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::Grover => "grover",
            AlgorithmKind::DeutschJozsa => "deutsch-jozsa",
            AlgorithmKind::Simon => "simon",
        }
    }

    /// The circuit a family is solved with by default.
    pub fn default_for(problem: &OracleProblem) -> Self {
        match problem.family() {
            Family::Grover => AlgorithmKind::Grover,
            Family::DeutschJozsa => AlgorithmKind::DeutschJozsa,
            Family::Simon | Family::Periodic => AlgorithmKind::Simon,
            Family::Custom if problem.value_bits() == 1 => AlgorithmKind::DeutschJozsa,
            Family::Custom => AlgorithmKind::Simon,
        }
    }

    fn check(self, problem: &OracleProblem) -> Result<()> {
        let fail = |reason| {
            Err(Error::IncompatibleKind {
                kind: self.name(),
                problem: problem.name().to_string(),
                reason,
            })
        };
        let family_ok = match (self, problem.family()) {
            (_, Family::Custom) => true,
            (AlgorithmKind::Grover, f) => f == Family::Grover,
            (AlgorithmKind::DeutschJozsa, f) => f == Family::DeutschJozsa,
            (AlgorithmKind::Simon, f) => matches!(f, Family::Simon | Family::Periodic),
        };
        if !family_ok {
            return fail("the circuit is not defined for this family");
        }
        if self != AlgorithmKind::Simon && problem.value_bits() != 1 {
            return fail("a phase oracle needs one-bit function values");
        }
        Ok(())
    }

    pub fn uses_value_register(self) -> bool {
        self == AlgorithmKind::Simon
    }
}

/// Register layout `B ⊗ A`, plus `V` for XOR-oracle circuits.
pub fn layout_for(problem: &OracleProblem, kind: AlgorithmKind, max_bits: usize) -> Result<RegisterLayout> {
    let mut regs = alloc::vec![(SETTING, problem.setting_len()), (ARGUMENT, problem.arg_bits())];
    if kind.uses_value_register() {
        regs.push((VALUE, problem.value_bits()));
    }
    RegisterLayout::with_max_bits(&regs, max_bits)
}

pub fn hadamard_all(layout: &RegisterLayout, register: &str) -> Result<Unitary> {
    Unitary::hadamard(layout.clone(), register)
}

pub fn inversion_about_mean(layout: &RegisterLayout, register: &str) -> Result<Unitary> {
    Unitary::inversion_about_mean(layout.clone(), register)
}

fn oracle_table(problem: &OracleProblem, layout: &RegisterLayout, target: Option<usize>) -> Result<Arc<OracleTable>> {
    let values: BTreeMap<u64, Vec<u64>> = problem
        .entries()
        .iter()
        .map(|e| (e.setting.value(), e.table.clone()))
        .collect();
    Ok(Arc::new(OracleTable {
        setting: layout.position(SETTING)?,
        argument: layout.position(ARGUMENT)?,
        target,
        values,
    }))
}

/// `|b⟩|a⟩ → (−1)^{f_b(a)} |b⟩|a⟩`; settings outside the problem are left alone.
pub fn phase_oracle(problem: &OracleProblem, layout: &RegisterLayout) -> Result<Unitary> {
    if problem.value_bits() != 1 {
        return Err(Error::UnsupportedOracle(alloc::format!(
            "phase oracle needs one-bit values, {} has {}",
            problem.name(),
            problem.value_bits()
        )));
    }
    check_widths(problem, layout)?;
    let table = oracle_table(problem, layout, None)?;
    Ok(Unitary::identity(layout.clone()).then(Gate::PhaseOracle(table)))
}

/// `|b⟩|a⟩|v⟩ → |b⟩|a⟩|v ⊕ f_b(a)⟩`.
pub fn xor_oracle(problem: &OracleProblem, layout: &RegisterLayout) -> Result<Unitary> {
    check_widths(problem, layout)?;
    let v = layout.position(VALUE)?;
    if layout.width(v) != problem.value_bits() {
        return Err(Error::DimensionMismatch {
            expected: problem.value_bits(),
            found: layout.width(v),
        });
    }
    let table = oracle_table(problem, layout, Some(v))?;
    Ok(Unitary::identity(layout.clone()).then(Gate::XorOracle(table)))
}

fn check_widths(problem: &OracleProblem, layout: &RegisterLayout) -> Result<()> {
    for (name, want) in [(SETTING, problem.setting_len()), (ARGUMENT, problem.arg_bits())] {
        let got = layout.width(layout.position(name)?);
        if got != want {
            return Err(Error::DimensionMismatch {
                expected: want,
                found: got,
            });
        }
    }
    Ok(())
}

/// `max(1, ⌊(π/4)·2^{n/2}⌋)`.
pub fn grover_iterations(n: usize) -> usize {
    let k = libm::floor(core::f64::consts::FRAC_PI_4 * libm::pow(2.0, n as f64 / 2.0)) as usize;
    k.max(1)
}

/// Success probability of `k` Grover iterations over `2^n` items.
pub fn grover_success_probability(n: usize, k: usize) -> f64 {
    let theta = libm::asin(libm::pow(2.0, -(n as f64) / 2.0));
    let s = libm::sin((2 * k + 1) as f64 * theta);
    s * s
}

#[derive(Clone, Debug)]
pub struct Circuit {
    pub kind: AlgorithmKind,
    pub unitary: Unitary,
    /// Grover iterations; 1 for the single-query circuits.
    pub iterations: usize,
}

impl Circuit {
    pub fn layout(&self) -> &RegisterLayout {
        self.unitary.layout()
    }

    pub fn query_count(&self) -> usize {
        self.unitary.query_count()
    }
}

pub fn build_unitary(problem: &OracleProblem, kind: AlgorithmKind) -> Result<Circuit> {
    build_unitary_with(problem, kind, DEFAULT_MAX_BITS)
}

/// Builds `Û` under a custom qubit cap.
pub fn build_unitary_with(problem: &OracleProblem, kind: AlgorithmKind, max_bits: usize) -> Result<Circuit> {
    kind.check(problem)?;
    let layout = layout_for(problem, kind, max_bits)?;
    let a = layout.position(ARGUMENT)?;
    let mut u = Unitary::identity(layout.clone()).then(Gate::Hadamard(a));
    let mut iterations = 1;
    match kind {
        AlgorithmKind::Grover => {
            iterations = grover_iterations(problem.arg_bits());
            let oracle = phase_oracle(problem, &layout)?;
            for _ in 0..iterations {
                u = u.followed_by(&oracle)?.then(Gate::InversionAboutMean(a));
            }
        }
        AlgorithmKind::DeutschJozsa => {
            u = u.followed_by(&phase_oracle(problem, &layout)?)?.then(Gate::Hadamard(a));
        }
        AlgorithmKind::Simon => {
            u = u.followed_by(&xor_oracle(problem, &layout)?)?.then(Gate::Hadamard(a));
        }
    }
    Ok(Circuit {
        kind,
        unitary: u,
        iterations,
    })
}

/// Uniform superposition of the problem's settings in `B`, every other
/// register blank.
pub fn alice_input(problem: &OracleProblem, layout: &RegisterLayout) -> Result<State> {
    let settings: Vec<Bits> = problem.settings().collect();
    blank_rest(layout, &settings)
}

/// Uniform superposition over `settings` in `B`, every other register blank.
pub fn reduced_input(problem: &OracleProblem, layout: &RegisterLayout, settings: &[Bits]) -> Result<State> {
    for s in settings {
        problem.require(s)?;
    }
    blank_rest(layout, settings)
}

fn blank_rest(layout: &RegisterLayout, settings: &[Bits]) -> Result<State> {
    let rest: Vec<Bits> = layout.registers()[1..].iter().map(|r| Bits::zero(r.width())).collect();
    State::uniform_over(layout.clone(), SETTING, settings, &rest)
}

/// `|b⟩_B|0…⟩`, the state right after the setter's measurement.
pub fn sharp_input(problem: &OracleProblem, layout: &RegisterLayout, setting: &Bits) -> Result<State> {
    problem.require(setting)?;
    let mut labels = alloc::vec![*setting];
    labels.extend(layout.registers()[1..].iter().map(|r| Bits::zero(r.width())));
    State::basis(layout.clone(), &labels)
}

/// What the solver reads off a final `A` outcome, where one outcome decides.
pub fn decode(kind: AlgorithmKind, outcome: &Bits) -> Option<Bits> {
    match kind {
        AlgorithmKind::Grover => Some(*outcome),
        AlgorithmKind::DeutschJozsa => Some(Bits::of(u64::from(outcome.value() != 0), 1)),
        AlgorithmKind::Simon => None,
    }
}

#[derive(Clone, Debug)]
pub enum Selection {
    Setting(Bits),
    Random,
}

#[derive(Clone, Debug)]
pub struct RunTranscript {
    pub problem: String,
    pub kind: AlgorithmKind,
    pub setting: Bits,
    pub query_count: usize,
    /// Uniform superposition of settings, blank solver registers.
    pub input: State,
    /// After the setter's measurement of `B`.
    pub after_selection: State,
    /// `Û` applied to `after_selection`.
    pub output: State,
    /// Born distribution of the final `A` measurement.
    pub final_distribution: Vec<(Bits, f64)>,
    pub outcome: Bits,
    pub after_final: State,
    pub decoded: Option<Bits>,
    /// `Û` applied to the unprojected input, the solver-relative picture.
    pub alice_output: State,
    /// `alice_output` after the final measurement and the postponed
    /// projection on `b`.
    pub alice_final: State,
}

/// Uniform double in `[0, 1)` from the top 53 bits of one draw.
pub fn uniform01(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn sample<T: Copy>(dist: &[(T, f64)], rng: &mut impl RngCore) -> T {
    let x = uniform01(rng);
    let mut acc = 0.0;
    for &(v, p) in dist {
        acc += p;
        if x < acc {
            return v;
        }
    }
    dist.last().expect("nonempty distribution").0
}

/// Runs the whole protocol: superposed settings, setter's measurement of
/// `B`, solver's `Û`, final measurement of `A`.
pub fn run_extended(
    problem: &OracleProblem,
    circuit: &Circuit,
    selection: Selection,
    rng: &mut impl RngCore,
) -> Result<RunTranscript> {
    let layout = circuit.layout();
    let input = alice_input(problem, layout)?;
    let setting = match selection {
        Selection::Setting(b) => {
            problem.require(&b)?;
            b
        }
        Selection::Random => {
            let uniform: Vec<(Bits, f64)> = problem.settings().map(|s| (s, 1.0 / problem.len() as f64)).collect();
            sample(&uniform, rng)
        }
    };
    let (_, after_selection) = input.project(SETTING, &setting)?;
    let output = after_selection.apply(&circuit.unitary)?;
    let final_distribution = output.distribution(ARGUMENT)?;
    let outcome = sample(&final_distribution, rng);
    let (_, after_final) = output.project(ARGUMENT, &outcome)?;

    let alice_output = input.apply(&circuit.unitary)?;
    let (_, alice_final) = alice_output.project(ARGUMENT, &outcome)?;
    let (_, alice_final) = alice_final.project(SETTING, &setting)?;

    Ok(RunTranscript {
        problem: problem.name().to_string(),
        kind: circuit.kind,
        setting,
        query_count: circuit.query_count(),
        input,
        after_selection,
        output,
        final_distribution,
        outcome,
        after_final,
        decoded: decode(circuit.kind, &outcome),
        alice_output,
        alice_final,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimonSolution {
    Found(Bits),
    Insufficient { rank: usize },
}

/// Recovers the period from outcomes `a` with `a·p = 0`.
pub fn simon_postprocess(samples: &[Bits], n: usize) -> Result<SimonSolution> {
    if let Some(bad) = samples.iter().find(|s| s.len() != n) {
        return Err(Error::InvalidBits(alloc::format!("sample {bad} is not {n} bits")));
    }
    let m = BitMatrix::new(n, samples.iter().map(|s| s.value()).collect())?;
    let rank = m.rank();
    if rank == n {
        return Err(Error::InconsistentSamples);
    }
    if rank + 1 < n {
        return Ok(SimonSolution::Insufficient { rank });
    }
    let kernel = m.null_space();
    Ok(SimonSolution::Found(Bits::of(kernel[0], n)))
}

/// Expected number of Simon runs until the samples reach rank `n − 1`.
pub fn simon_expected_runs(n: usize) -> f64 {
    (0..n - 1)
        .map(|i| 1.0 / (1.0 - libm::pow(2.0, i as f64 - (n as f64 - 1.0))))
        .sum()
}
