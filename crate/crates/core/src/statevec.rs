//! Dense state-vector simulation over named registers.
//!
//! The basis index of a labeled tuple is the concatenation of the register
//! contents in layout order, the first register being most significant. With
//! layout `(B:2, A:2, V:1)` the ket `|01⟩_B|00⟩_A|0⟩_V` has index `0b01000`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::bits::{mask, Bits};
use crate::gf2::BitMatrix;
use crate::{Error, Result};

pub const DEFAULT_MAX_BITS: usize = 24;

/// Largest layout for which [`Unitary::to_matrix`] will materialize a matrix.
pub const MAX_MATRIX_BITS: usize = 12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Register {
    name: String,
    width: usize,
}

impl Register {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn width(&self) -> usize {
        self.width
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterLayout {
    registers: Vec<Register>,
    total_bits: usize,
}

impl RegisterLayout {
    pub fn new<S: AsRef<str>>(registers: &[(S, usize)]) -> Result<Self> {
        RegisterLayout::with_max_bits(registers, DEFAULT_MAX_BITS)
    }

    pub fn with_max_bits<S: AsRef<str>>(registers: &[(S, usize)], max_bits: usize) -> Result<Self> {
        let mut out: Vec<Register> = Vec::with_capacity(registers.len());
        for (name, width) in registers {
            let name = name.as_ref();
            if out.iter().any(|r| r.name == name) {
                return Err(Error::DuplicateRegister(name.to_string()));
            }
            if *width == 0 {
                return Err(Error::EmptyRegister(name.to_string()));
            }
            out.push(Register {
                name: name.to_string(),
                width: *width,
            });
        }
        let total_bits = out.iter().map(|r| r.width).sum();
        // usize indices and 1 << total_bits must stay meaningful
        if total_bits > max_bits || total_bits >= usize::BITS as usize {
            return Err(Error::TooManyBits {
                requested: total_bits,
                max: max_bits,
            });
        }
        Ok(RegisterLayout {
            registers: out,
            total_bits,
        })
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn total_bits(&self) -> usize {
        self.total_bits
    }

    pub fn dimension(&self) -> usize {
        1usize << self.total_bits
    }

    pub fn position(&self, name: &str) -> Result<usize> {
        self.registers
            .iter()
            .position(|r| r.name == name)
            .ok_or_else(|| Error::UnknownRegister(name.to_string()))
    }

    pub fn width(&self, register: usize) -> usize {
        self.registers[register].width
    }

    /// Number of bits to the right of `register` in a basis index.
    pub fn shift(&self, register: usize) -> usize {
        self.registers[register + 1..].iter().map(|r| r.width).sum()
    }

    pub fn field(&self, index: usize, register: usize) -> u64 {
        (index as u64 >> self.shift(register)) & mask(self.width(register))
    }

    pub fn with_field(&self, index: usize, register: usize, value: u64) -> usize {
        let shift = self.shift(register);
        let m = (mask(self.width(register)) << shift) as usize;
        (index & !m) | ((value as usize) << shift)
    }

    /// Basis index of one label per register, in layout order.
    pub fn index_of(&self, labels: &[Bits]) -> Result<usize> {
        if labels.len() != self.registers.len() {
            return Err(Error::LabelCount {
                expected: self.registers.len(),
                found: labels.len(),
            });
        }
        let mut index = 0usize;
        for (reg, label) in self.registers.iter().zip(labels) {
            if label.len() != reg.width {
                return Err(Error::InvalidLabel {
                    register: reg.name.clone(),
                    width: reg.width,
                    label: label.to_string(),
                });
            }
            index = (index << reg.width) | label.value() as usize;
        }
        Ok(index)
    }

    pub fn labels_of(&self, index: usize) -> Vec<Bits> {
        (0..self.registers.len())
            .map(|r| Bits::of(self.field(index, r), self.width(r)))
            .collect()
    }

    fn check_value(&self, register: usize, label: &Bits) -> Result<()> {
        if label.len() != self.width(register) {
            return Err(Error::InvalidLabel {
                register: self.registers[register].name.clone(),
                width: self.width(register),
                label: label.to_string(),
            });
        }
        Ok(())
    }
}

/// A complex amplitude vector over a [`RegisterLayout`].
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    layout: RegisterLayout,
    amplitudes: Vec<Complex64>,
}

#[derive(Clone, Debug)]
pub struct MeasurementOutcome {
    pub observable: String,
    pub value: Bits,
    pub probability: f64,
    pub post_state: State,
}

impl State {
    pub fn from_amplitudes(layout: RegisterLayout, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != layout.dimension() {
            return Err(Error::DimensionMismatch {
                expected: layout.dimension(),
                found: amplitudes.len(),
            });
        }
        Ok(State { layout, amplitudes })
    }

    pub fn zero(layout: RegisterLayout) -> Self {
        let amplitudes = vec![ZERO; layout.dimension()];
        State { layout, amplitudes }
    }

    /// `|labels⟩`, one label per register in layout order.
    pub fn basis(layout: RegisterLayout, labels: &[Bits]) -> Result<Self> {
        let index = layout.index_of(labels)?;
        let mut s = State::zero(layout);
        s.amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// Equal superposition of every value of `register`; `rest` labels the
    /// other registers in layout order.
    pub fn uniform_superposition(layout: RegisterLayout, register: &str, rest: &[Bits]) -> Result<Self> {
        let r = layout.position(register)?;
        let values: Vec<Bits> = (0..1u64 << layout.width(r))
            .map(|v| Bits::of(v, layout.width(r)))
            .collect();
        State::uniform_over(layout, register, &values, rest)
    }

    /// Equal superposition over the given values of `register` only.
    pub fn uniform_over(layout: RegisterLayout, register: &str, values: &[Bits], rest: &[Bits]) -> Result<Self> {
        let r = layout.position(register)?;
        if rest.len() + 1 != layout.registers.len() {
            return Err(Error::LabelCount {
                expected: layout.registers.len() - 1,
                found: rest.len(),
            });
        }
        if values.is_empty() {
            return Err(Error::ZeroNorm);
        }
        let mut labels: Vec<Bits> = rest.to_vec();
        labels.insert(r, Bits::zero(layout.width(r)));
        let base = layout.index_of(&labels)?;
        let distinct: BTreeSet<Bits> = values.iter().copied().collect();
        let amp = Complex64::new(1.0 / libm::sqrt(distinct.len() as f64), 0.0);
        let mut s = State::zero(layout);
        for v in &distinct {
            s.layout.check_value(r, v)?;
            let i = s.layout.with_field(base, r, v.value());
            s.amplitudes[i] = amp;
        }
        Ok(s)
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, labels: &[Bits]) -> Result<Complex64> {
        Ok(self.amplitudes[self.layout.index_of(labels)?])
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.amplitudes.iter().map(|a| a.norm_sqr()).sum())
    }

    pub fn normalized(&self) -> Result<State> {
        let n = self.norm();
        if n < 1e-300 {
            return Err(Error::ZeroNorm);
        }
        Ok(State {
            layout: self.layout.clone(),
            amplitudes: self.amplitudes.iter().map(|a| a / n).collect(),
        })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &State) -> Result<Complex64> {
        self.check_layout(&other.layout)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Largest per-amplitude difference after aligning the global phase of
    /// `other` to `self`.
    pub fn distance_up_to_phase(&self, other: &State) -> Result<f64> {
        let overlap = self.inner(other)?;
        let phase = if overlap.norm() > 1e-300 {
            overlap.conj() / overlap.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b * phase).norm())
            .fold(0.0, f64::max))
    }

    pub fn approx_eq_up_to_phase(&self, other: &State, tol: f64) -> bool {
        self.distance_up_to_phase(other).is_ok_and(|d| d < tol)
    }

    /// Nonzero amplitudes with their basis indices.
    pub fn support(&self, tol: f64) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(move |(_, a)| a.norm() > tol)
            .map(|(i, a)| (i, *a))
    }

    /// Distinct contents of `register` carrying amplitude above `tol`.
    pub fn register_support(&self, register: &str, tol: f64) -> Result<Vec<Bits>> {
        let r = self.layout.position(register)?;
        let w = self.layout.width(r);
        let set: BTreeSet<u64> = self.support(tol).map(|(i, _)| self.layout.field(i, r)).collect();
        Ok(set.into_iter().map(|v| Bits::of(v, w)).collect())
    }

    pub fn apply(&self, unitary: &Unitary) -> Result<State> {
        self.check_layout(&unitary.layout)?;
        let mut amps = self.amplitudes.clone();
        for gate in &unitary.gates {
            amps = gate.act(&self.layout, amps, false);
        }
        Ok(State {
            layout: self.layout.clone(),
            amplitudes: amps,
        })
    }

    pub fn apply_adjoint(&self, unitary: &Unitary) -> Result<State> {
        self.check_layout(&unitary.layout)?;
        let mut amps = self.amplitudes.clone();
        for gate in unitary.gates.iter().rev() {
            amps = gate.act(&self.layout, amps, true);
        }
        Ok(State {
            layout: self.layout.clone(),
            amplitudes: amps,
        })
    }

    /// Keeps the amplitudes whose `register` content satisfies `keep`;
    /// the result is not renormalized.
    pub fn project_where(&self, register: &str, keep: impl Fn(u64) -> bool) -> Result<State> {
        let r = self.layout.position(register)?;
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| if keep(self.layout.field(i, r)) { *a } else { ZERO })
            .collect();
        Ok(State {
            layout: self.layout.clone(),
            amplitudes,
        })
    }

    /// Born probability of `register = value` and the renormalized
    /// post-measurement state.
    pub fn project(&self, register: &str, value: &Bits) -> Result<(f64, State)> {
        let r = self.layout.position(register)?;
        self.layout.check_value(r, value)?;
        let projected = self.project_where(register, |x| x == value.value())?;
        let p = projected.norm_sqr_ratio(self);
        if p <= 0.0 {
            return Err(Error::ZeroProbability(value.to_string()));
        }
        Ok((p, projected.normalized()?))
    }

    /// Outcome probabilities of a full measurement of `register`,
    /// zero-probability values omitted.
    pub fn distribution(&self, register: &str) -> Result<Vec<(Bits, f64)>> {
        self.partial_distribution(register, &BitMatrix::identity(self.register_width(register)?))
    }

    pub fn partial_distribution(&self, register: &str, map: &BitMatrix) -> Result<Vec<(Bits, f64)>> {
        let r = self.layout.position(register)?;
        self.check_map(r, map)?;
        let total: f64 = self.amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if total <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        let mut weights: BTreeMap<u64, f64> = BTreeMap::new();
        for (i, a) in self.amplitudes.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                *weights.entry(map.apply(self.layout.field(i, r))).or_default() += p;
            }
        }
        Ok(weights
            .into_iter()
            .map(|(v, p)| (Bits::of(v, map.row_count()), p / total))
            .collect())
    }

    pub fn measure(&self, register: &str) -> Result<Vec<MeasurementOutcome>> {
        let width = self.register_width(register)?;
        let mut outcomes = self.measure_partial(register, &BitMatrix::identity(width))?;
        for o in &mut outcomes {
            o.observable = register.to_string();
        }
        Ok(outcomes)
    }

    /// Coarse-grained measurement of `register` through the GF(2) map `map`:
    /// outcome `v` keeps the basis labels whose content `x` has `map·x = v`.
    pub fn measure_partial(&self, register: &str, map: &BitMatrix) -> Result<Vec<MeasurementOutcome>> {
        let r = self.layout.position(register)?;
        let observable = alloc::format!("{register}{map}");
        self.partial_distribution(register, map)?
            .into_iter()
            .map(|(value, probability)| {
                let v = value.value();
                let post = self.project_where(register, |x| map.apply(x) == v)?;
                let _ = r;
                Ok(MeasurementOutcome {
                    observable: observable.clone(),
                    value,
                    probability,
                    post_state: post.normalized()?,
                })
            })
            .collect()
    }

    /// Largest absolute entry difference between the reduced density
    /// operators of `register` in `self` and `other`.
    ///
    /// Only register values carrying amplitude in either state are
    /// materialized, so wide registers with sparse support stay cheap.
    pub fn reduced_density_distance(&self, other: &State, register: &str) -> Result<f64> {
        self.check_layout(&other.layout)?;
        let r = self.layout.position(register)?;
        let rows_a = self.reduced_rows(r);
        let rows_b = other.reduced_rows(r);
        let keys: BTreeSet<u64> = rows_a.keys().chain(rows_b.keys()).copied().collect();
        let keys: Vec<u64> = keys.into_iter().collect();
        let empty = Vec::new();
        let mut worst: f64 = 0.0;
        for (i, x) in keys.iter().enumerate() {
            for y in &keys[i..] {
                let a = overlap(rows_a.get(x).unwrap_or(&empty), rows_a.get(y).unwrap_or(&empty));
                let b = overlap(rows_b.get(x).unwrap_or(&empty), rows_b.get(y).unwrap_or(&empty));
                worst = worst.max((a - b).norm());
            }
        }
        Ok(worst)
    }

    /// For each value of register `r`, the (rest-index, amplitude) pairs in
    /// increasing rest-index order.
    fn reduced_rows(&self, r: usize) -> BTreeMap<u64, Vec<(usize, Complex64)>> {
        let mut rows: BTreeMap<u64, Vec<(usize, Complex64)>> = BTreeMap::new();
        for (i, a) in self.amplitudes.iter().enumerate() {
            if *a != ZERO {
                let rest = self.layout.with_field(i, r, 0);
                rows.entry(self.layout.field(i, r)).or_default().push((rest, *a));
            }
        }
        rows
    }

    fn norm_sqr_ratio(&self, whole: &State) -> f64 {
        let total: f64 = whole.amplitudes.iter().map(|a| a.norm_sqr()).sum();
        let part: f64 = self.amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if total > 0.0 {
            part / total
        } else {
            0.0
        }
    }

    fn register_width(&self, register: &str) -> Result<usize> {
        Ok(self.layout.width(self.layout.position(register)?))
    }

    fn check_layout(&self, other: &RegisterLayout) -> Result<()> {
        if &self.layout != other {
            return Err(Error::LayoutMismatch);
        }
        Ok(())
    }

    fn check_map(&self, r: usize, map: &BitMatrix) -> Result<()> {
        if map.cols() != self.layout.width(r) {
            return Err(Error::DimensionMismatch {
                expected: self.layout.width(r),
                found: map.cols(),
            });
        }
        Ok(())
    }

    /// `self + other`, unnormalized.
    pub fn add(&self, other: &State) -> Result<State> {
        self.check_layout(&other.layout)?;
        Ok(State {
            layout: self.layout.clone(),
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, factor: f64) -> State {
        State {
            layout: self.layout.clone(),
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }
}

/// `Σ_rest ψ(x, rest) ψ*(y, rest)` over two sorted sparse rows.
fn overlap(x: &[(usize, Complex64)], y: &[(usize, Complex64)]) -> Complex64 {
    let (mut i, mut j) = (0, 0);
    let mut acc = ZERO;
    while i < x.len() && j < y.len() {
        match x[i].0.cmp(&y[j].0) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                acc += x[i].1 * y[j].1.conj();
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

/// Function table driving an oracle: for each setting value in the control
/// register, the function value for every argument. Settings absent from the
/// table leave their branch untouched.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleTable {
    pub setting: usize,
    pub argument: usize,
    pub target: Option<usize>,
    pub values: BTreeMap<u64, Vec<u64>>,
}

impl OracleTable {
    /// `f_b(a)` for every index in order, looking each setting up once per run.
    fn values_in_order<'a>(&'a self, layout: &'a RegisterLayout, len: usize) -> impl Iterator<Item = Option<u64>> + 'a {
        let mut cached: Option<(u64, Option<&'a Vec<u64>>)> = None;
        (0..len).map(move |i| {
            let b = layout.field(i, self.setting);
            let table = match cached {
                Some((cb, t)) if cb == b => t,
                _ => {
                    let t = self.values.get(&b);
                    cached = Some((b, t));
                    t
                }
            };
            table.map(|t| t[layout.field(i, self.argument) as usize])
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    /// `H^{⊗w}` on one register.
    Hadamard(usize),
    /// `2|u⟩⟨u| − I` on one register, `u` the uniform state.
    InversionAboutMean(usize),
    /// `|b⟩|a⟩ → (−1)^{f_b(a)} |b⟩|a⟩`.
    PhaseOracle(Arc<OracleTable>),
    /// `|b⟩|a⟩|v⟩ → |b⟩|a⟩|v ⊕ f_b(a)⟩`.
    XorOracle(Arc<OracleTable>),
    /// Full-layout matrix, row-major.
    Dense(Arc<Vec<Vec<Complex64>>>),
}

impl Gate {
    pub fn is_query(&self) -> bool {
        matches!(self, Gate::PhaseOracle(_) | Gate::XorOracle(_))
    }

    fn act(&self, layout: &RegisterLayout, mut amps: Vec<Complex64>, adjoint: bool) -> Vec<Complex64> {
        let len = amps.len();
        match self {
            Gate::Hadamard(r) => {
                let shift = layout.shift(*r);
                let s = core::f64::consts::FRAC_1_SQRT_2;
                for k in 0..layout.width(*r) {
                    let bit = 1usize << (shift + k);
                    for i in 0..amps.len() {
                        if i & bit == 0 {
                            let (x, y) = (amps[i], amps[i | bit]);
                            amps[i] = (x + y) * s;
                            amps[i | bit] = (x - y) * s;
                        }
                    }
                }
                amps
            }
            Gate::InversionAboutMean(r) => {
                let shift = layout.shift(*r);
                let size = 1usize << layout.width(*r);
                let block = (size - 1) << shift;
                for base in 0..amps.len() {
                    if base & block != 0 {
                        continue;
                    }
                    let mean: Complex64 = (0..size).map(|x| amps[base | (x << shift)]).sum::<Complex64>() / size as f64;
                    for x in 0..size {
                        let i = base | (x << shift);
                        amps[i] = mean * 2.0 - amps[i];
                    }
                }
                amps
            }
            Gate::PhaseOracle(t) => {
                for (a, f) in amps.iter_mut().zip(t.values_in_order(layout, len)) {
                    if f.is_some_and(|f| f & 1 == 1) {
                        *a = -*a;
                    }
                }
                amps
            }
            Gate::XorOracle(t) => {
                let target = t.target.expect("xor oracle has a target register");
                let mut out = vec![ZERO; amps.len()];
                for (i, (a, f)) in amps.iter().zip(t.values_in_order(layout, len)).enumerate() {
                    let j = match f {
                        Some(f) => layout.with_field(i, target, layout.field(i, target) ^ f),
                        None => i,
                    };
                    out[j] = *a;
                }
                out
            }
            Gate::Dense(m) => (0..amps.len())
                .map(|i| {
                    (0..amps.len())
                        .map(|j| if adjoint { m[j][i].conj() } else { m[i][j] } * amps[j])
                        .sum()
                })
                .collect(),
        }
    }
}

/// A unitary on a layout, kept as a gate sequence applied left to right.
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary {
    layout: RegisterLayout,
    gates: Vec<Gate>,
}

impl Unitary {
    pub fn identity(layout: RegisterLayout) -> Self {
        Unitary {
            layout,
            gates: Vec::new(),
        }
    }

    pub fn hadamard(layout: RegisterLayout, register: &str) -> Result<Self> {
        let r = layout.position(register)?;
        Ok(Unitary::identity(layout).then(Gate::Hadamard(r)))
    }

    pub fn inversion_about_mean(layout: RegisterLayout, register: &str) -> Result<Self> {
        let r = layout.position(register)?;
        Ok(Unitary::identity(layout).then(Gate::InversionAboutMean(r)))
    }

    /// Wraps an explicit matrix. Unitarity is not checked here; see
    /// [`Unitary::unitarity_defect`].
    pub fn from_matrix(layout: RegisterLayout, matrix: Vec<Vec<Complex64>>) -> Result<Self> {
        let d = layout.dimension();
        if matrix.len() != d || matrix.iter().any(|row| row.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: matrix.len(),
            });
        }
        Ok(Unitary::identity(layout).then(Gate::Dense(Arc::new(matrix))))
    }

    /// Appends a gate applied after the existing ones.
    pub fn then(mut self, gate: Gate) -> Self {
        self.gates.push(gate);
        self
    }

    /// `other ∘ self`: first `self`, then `other`.
    pub fn followed_by(mut self, other: &Unitary) -> Result<Self> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch);
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(self)
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Number of oracle applications.
    pub fn query_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_query()).count()
    }

    /// Column `j` is the image of basis vector `j`.
    pub fn to_matrix(&self) -> Result<Vec<Vec<Complex64>>> {
        if self.layout.total_bits > MAX_MATRIX_BITS {
            return Err(Error::CapExceeded {
                what: "matrix materialization bits",
                limit: MAX_MATRIX_BITS,
                found: self.layout.total_bits,
            });
        }
        let d = self.layout.dimension();
        let mut m = vec![vec![ZERO; d]; d];
        for j in 0..d {
            let mut e = vec![ZERO; d];
            e[j] = Complex64::new(1.0, 0.0);
            let col = State::from_amplitudes(self.layout.clone(), e)?.apply(self)?;
            for (i, a) in col.amplitudes.into_iter().enumerate() {
                m[i][j] = a;
            }
        }
        Ok(m)
    }

    /// `max |(U†U − I)_{ij}|`.
    pub fn unitarity_defect(&self) -> Result<f64> {
        let m = self.to_matrix()?;
        let d = m.len();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let dot: Complex64 = (0..d).map(|k| m[k][i].conj() * m[k][j]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - expect).norm());
            }
        }
        Ok(worst)
    }
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(s: &str) -> Bits {
        Bits::parse(s).unwrap()
    }

    fn ba() -> RegisterLayout {
        RegisterLayout::new(&[("B", 2), ("A", 2)]).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn basis_state_index_is_concatenation() {
        let layout = RegisterLayout::new(&[("B", 2), ("A", 2), ("V", 1)]).unwrap();
        let s = State::basis(layout.clone(), &[b("01"), b("00"), b("0")]).unwrap();
        // independent enumeration: walk all indices and decode by hand
        let mut found = None;
        for i in 0..32usize {
            let (bb, aa, vv) = (i >> 3, (i >> 1) & 3, i & 1);
            if bb == 1 && aa == 0 && vv == 0 {
                found = Some(i);
            }
        }
        assert_eq!(found, Some(0b01000));
        assert_eq!(s.amplitudes()[0b01000], c(1.0));
        assert_eq!(s.support(0.0).count(), 1);
        assert_eq!(layout.labels_of(8), alloc::vec![b("01"), b("00"), b("0")]);
    }

    #[test]
    fn basis_state_single_register() {
        let s = State::basis(RegisterLayout::new(&[("A", 2)]).unwrap(), &[b("00")]).unwrap();
        assert_eq!(s.amplitudes()[0], c(1.0));
    }

    #[test]
    fn width_mismatch_is_rejected() {
        let err = State::basis(ba(), &[b("1"), b("00")]).unwrap_err();
        assert!(matches!(err, Error::InvalidLabel { .. }));
    }

    #[test]
    fn layout_invariants() {
        assert!(matches!(
            RegisterLayout::new(&[("A", 1), ("A", 1)]),
            Err(Error::DuplicateRegister(_))
        ));
        assert!(matches!(RegisterLayout::new(&[("A", 0)]), Err(Error::EmptyRegister(_))));
        assert!(matches!(
            RegisterLayout::new(&[("A", 20), ("B", 5)]),
            Err(Error::TooManyBits { .. })
        ));
        assert!(RegisterLayout::with_max_bits(&[("A", 20), ("B", 5)], 26).is_ok());
    }

    #[test]
    fn uniform_over_b_register() {
        let s = State::uniform_superposition(ba(), "B", &[b("00")]).unwrap();
        for x in ["00", "01", "10", "11"] {
            assert!((s.amplitude(&[b(x), b("00")]).unwrap() - c(0.5)).norm() < 1e-12);
        }
        let one = State::uniform_superposition(RegisterLayout::new(&[("Q", 1)]).unwrap(), "Q", &[]).unwrap();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert!((one.amplitudes()[0] - c(h)).norm() < 1e-12);
        assert!((one.amplitudes()[1] - c(h)).norm() < 1e-12);
        assert!(State::uniform_superposition(ba(), "X", &[b("00")]).is_err());
    }

    #[test]
    fn measure_b_on_uniform_input() {
        let s = State::uniform_superposition(ba(), "B", &[b("00")]).unwrap();
        let outcomes = s.measure("B").unwrap();
        assert_eq!(outcomes.len(), 4);
        for o in &outcomes {
            assert!((o.probability - 0.25).abs() < 1e-12);
            assert!((o.post_state.norm() - 1.0).abs() < 1e-12);
            let expect = State::basis(ba(), &[o.value, b("00")]).unwrap();
            assert!(o.post_state.approx_eq_up_to_phase(&expect, 1e-9));
        }
    }

    #[test]
    fn measure_sharp_register_leaves_state() {
        let s = State::basis(ba(), &[b("01"), b("01")]).unwrap();
        let outcomes = s.measure("A").unwrap();
        assert_eq!(outcomes.len(), 1);
        assert_eq!(outcomes[0].value, b("01"));
        assert!((outcomes[0].probability - 1.0).abs() < 1e-12);
        assert_eq!(outcomes[0].post_state, s);
    }

    fn entangled() -> State {
        // Σ_b |b⟩_B|b⟩_A / 2
        let mut amps = vec![ZERO; 16];
        for x in 0..4 {
            amps[(x << 2) | x] = c(0.5);
        }
        State::from_amplitudes(ba(), amps).unwrap()
    }

    #[test]
    fn partial_measurement_right_bit() {
        let m = BitMatrix::from_strs(2, &["01"]).unwrap();
        let outcomes = entangled().measure_partial("A", &m).unwrap();
        assert_eq!(outcomes.len(), 2);
        let one = outcomes.iter().find(|o| o.value == b("1")).unwrap();
        assert!((one.probability - 0.5).abs() < 1e-12);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![ZERO; 16];
        amps[0b0101] = c(h);
        amps[0b1111] = c(h);
        let expect = State::from_amplitudes(ba(), amps).unwrap();
        assert!(one.post_state.approx_eq_up_to_phase(&expect, 1e-9));
    }

    #[test]
    fn partial_measurement_parity_matches_filtering() {
        let m = BitMatrix::from_strs(2, &["11"]).unwrap();
        let outcomes = entangled().measure_partial("A", &m).unwrap();
        let one = outcomes.iter().find(|o| o.value == b("1")).unwrap();
        // brute force: keep labels whose A content has odd weight
        let mut amps = vec![ZERO; 16];
        for i in 0..16usize {
            if (i & 3).count_ones() % 2 == 1 {
                amps[i] = entangled().amplitudes()[i];
            }
        }
        let expect = State::from_amplitudes(ba(), amps).unwrap().normalized().unwrap();
        assert!(one.post_state.approx_eq_up_to_phase(&expect, 1e-9));
        assert!(expect.amplitude(&[b("01"), b("01")]).unwrap().norm() > 0.1);
        assert!(expect.amplitude(&[b("10"), b("10")]).unwrap().norm() > 0.1);
    }

    #[test]
    fn identity_map_matches_full_measurement() {
        let s = entangled();
        let full = s.measure("A").unwrap();
        let partial = s.measure_partial("A", &BitMatrix::identity(2)).unwrap();
        assert_eq!(full.len(), partial.len());
        for (x, y) in full.iter().zip(&partial) {
            assert_eq!(x.value, y.value);
            assert!((x.probability - y.probability).abs() < 1e-12);
            assert_eq!(x.post_state, y.post_state);
        }
    }

    #[test]
    fn partial_map_dimension_checked() {
        let m = BitMatrix::from_strs(3, &["011"]).unwrap();
        assert!(matches!(
            entangled().measure_partial("A", &m),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn reduced_density_examples() {
        let s = entangled();
        assert_eq!(s.reduced_density_distance(&s, "B").unwrap(), 0.0);
        // Entangling B with A removes the coherences of the uniform input:
        // ρ_B goes from the all-1/4 matrix to I/4, populations untouched.
        let input = State::uniform_superposition(ba(), "B", &[b("00")]).unwrap();
        assert!((input.reduced_density_distance(&s, "B").unwrap() - 0.25).abs() < 1e-12);
        for (x, y) in input
            .distribution("B")
            .unwrap()
            .iter()
            .zip(s.distribution("B").unwrap())
        {
            assert_eq!(x.0, y.0);
            assert!((x.1 - y.1).abs() < 1e-12);
        }
        let sharp_in = State::basis(ba(), &[b("10"), b("00")]).unwrap();
        let sharp_out = State::basis(ba(), &[b("10"), b("10")]).unwrap();
        assert!(sharp_in.reduced_density_distance(&sharp_out, "B").unwrap() < 1e-12);
        let l = RegisterLayout::new(&[("B", 1)]).unwrap();
        let zero = State::basis(l.clone(), &[b("0")]).unwrap();
        let one = State::basis(l, &[b("1")]).unwrap();
        assert!((zero.reduced_density_distance(&one, "B").unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_probability_projection_is_an_error() {
        let s = State::basis(ba(), &[b("01"), b("00")]).unwrap();
        assert!(matches!(s.project("B", &b("10")), Err(Error::ZeroProbability(_))));
    }

    #[test]
    fn inversion_about_mean_examples() {
        let l = RegisterLayout::new(&[("A", 2)]).unwrap();
        let im = Unitary::inversion_about_mean(l.clone(), "A").unwrap();
        let s = State::from_amplitudes(l.clone(), alloc::vec![c(0.5), c(-0.5), c(0.5), c(0.5)]).unwrap();
        let out = s.apply(&im).unwrap();
        let expect = State::basis(l.clone(), &[b("01")]).unwrap();
        assert!(out.distance_up_to_phase(&expect).unwrap() < 1e-12);
        assert!((out.amplitudes()[1] - c(1.0)).norm() < 1e-12, "sign is +|01⟩");
        let u = State::uniform_superposition(l.clone(), "A", &[]).unwrap();
        assert!((u.apply(&im).unwrap().amplitudes()[3] - u.amplitudes()[3]).norm() < 1e-12);
        let orth = State::from_amplitudes(l, alloc::vec![c(0.5), c(-0.5), c(0.5), c(-0.5)]).unwrap();
        let neg = orth.apply(&im).unwrap();
        for (x, y) in neg.amplitudes().iter().zip(orth.amplitudes()) {
            assert!((x + y).norm() < 1e-12);
        }
    }

    #[test]
    fn hadamard_matches_kronecker_product() {
        let u = Unitary::hadamard(ba(), "A").unwrap();
        let m = u.to_matrix().unwrap();
        // I_4 ⊗ H ⊗ H built entrywise
        let h = |x: usize, y: usize| if (x & y).count_ones() % 2 == 1 { -0.5 } else { 0.5 };
        for i in 0..16 {
            for j in 0..16 {
                let expect = if i >> 2 == j >> 2 { h(i & 3, j & 3) } else { 0.0 };
                assert!((m[i][j] - c(expect)).norm() < 1e-12);
            }
        }
        let twice = u.clone().followed_by(&u).unwrap();
        let s = State::basis(ba(), &[b("10"), b("01")]).unwrap();
        assert!(s.apply(&twice).unwrap().distance_up_to_phase(&s).unwrap() < 1e-12);
        assert!(u.unitarity_defect().unwrap() < 1e-12);
    }

    #[test]
    fn hadamard_spreads_blank_register() {
        let l = RegisterLayout::new(&[("A", 2)]).unwrap();
        let s = State::basis(l.clone(), &[b("00")]).unwrap();
        let out = s.apply(&Unitary::hadamard(l.clone(), "A").unwrap()).unwrap();
        let expect = State::uniform_superposition(l, "A", &[]).unwrap();
        assert!(out.distance_up_to_phase(&expect).unwrap() < 1e-12);
    }

    #[test]
    fn matrix_cap_enforced() {
        let l = RegisterLayout::new(&[("A", 13)]).unwrap();
        assert!(matches!(
            Unitary::identity(l).to_matrix(),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn layout_mismatch_rejected() {
        let s = State::basis(ba(), &[b("00"), b("00")]).unwrap();
        let other = Unitary::identity(RegisterLayout::new(&[("A", 4)]).unwrap());
        assert_eq!(s.apply(&other), Err(Error::LayoutMismatch));
    }

    fn random_state(layout: &RegisterLayout, seed: &[f64]) -> State {
        let d = layout.dimension();
        let amps = (0..d)
            .map(|i| Complex64::new(seed[(2 * i) % seed.len()], seed[(2 * i + 1) % seed.len()]))
            .collect();
        State::from_amplitudes(layout.clone(), amps).unwrap()
    }

    /// Gram-Schmidt on the columns of an arbitrary complex matrix.
    fn random_unitary(layout: &RegisterLayout, seed: &[f64]) -> Unitary {
        let d = layout.dimension();
        let mut cols: Vec<Vec<Complex64>> = (0..d)
            .map(|j| {
                (0..d)
                    .map(|i| {
                        let k = i * d + j;
                        Complex64::new(
                            seed[(2 * k) % seed.len()] + if i == j { 2.0 } else { 0.0 },
                            seed[(2 * k + 7) % seed.len()],
                        )
                    })
                    .collect()
            })
            .collect();
        for j in 0..d {
            for k in 0..j {
                let proj: Complex64 = (0..d).map(|i| cols[k][i].conj() * cols[j][i]).sum();
                for i in 0..d {
                    let v = cols[k][i];
                    cols[j][i] -= proj * v;
                }
            }
            let n = libm::sqrt(cols[j].iter().map(|a| a.norm_sqr()).sum::<f64>());
            for a in cols[j].iter_mut() {
                *a /= n;
            }
        }
        let m = (0..d).map(|i| (0..d).map(|j| cols[j][i]).collect()).collect();
        Unitary::from_matrix(layout.clone(), m).unwrap()
    }

    proptest! {
        #[test]
        fn adjoint_undoes_apply(seed in proptest::collection::vec(-1.0f64..1.0, 16..40)) {
            let layout = RegisterLayout::new(&[("B", 1), ("A", 2)]).unwrap();
            let psi = random_state(&layout, &seed);
            prop_assume!(psi.norm() > 1e-3);
            let psi = psi.normalized().unwrap();
            let u = random_unitary(&layout, &seed);
            prop_assert!(u.unitarity_defect().unwrap() < 1e-9);
            let out = psi.apply(&u).unwrap();
            prop_assert!((out.norm() - 1.0).abs() < 1e-9);
            let back = out.apply_adjoint(&u).unwrap();
            prop_assert!(back.distance_up_to_phase(&psi).unwrap() < 1e-9);
        }

        #[test]
        fn born_probabilities_sum_to_one(seed in proptest::collection::vec(-1.0f64..1.0, 8..40), rows in proptest::collection::vec(0u64..8, 0..3)) {
            let layout = RegisterLayout::new(&[("B", 2), ("A", 3)]).unwrap();
            let psi = random_state(&layout, &seed);
            prop_assume!(psi.norm() > 1e-3);
            let map = BitMatrix::new(3, rows).unwrap();
            let outcomes = psi.measure_partial("A", &map).unwrap();
            let total: f64 = outcomes.iter().map(|o| o.probability).sum();
            prop_assert!((total - 1.0).abs() < 1e-9);
            // projectors for distinct outcomes are orthogonal and complete
            let mut sum = State::zero(layout.clone());
            for (i, o) in outcomes.iter().enumerate() {
                prop_assert!((o.post_state.norm() - 1.0).abs() < 1e-9);
                for p in &outcomes[i + 1..] {
                    prop_assert!(o.post_state.inner(&p.post_state).unwrap().norm() < 1e-9);
                }
                sum = sum.add(&psi.project_where("A", |x| map.apply(x) == o.value.value()).unwrap()).unwrap();
            }
            prop_assert!(sum.distance_up_to_phase(&psi).unwrap() < 1e-12);
        }

        #[test]
        fn full_measurements_commute(seed in proptest::collection::vec(-1.0f64..1.0, 8..40), bv in 0u64..4, av in 0u64..4) {
            let layout = ba();
            let psi = random_state(&layout, &seed);
            let one = psi.project_where("B", |x| x == bv).unwrap().project_where("A", |x| x == av).unwrap();
            let two = psi.project_where("A", |x| x == av).unwrap().project_where("B", |x| x == bv).unwrap();
            prop_assert_eq!(one, two);
        }
    }
}
