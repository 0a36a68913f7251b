//! Dense statevector simulation.
//!
//! Qubit `q` of an `n`-qubit register is bit `n - 1 - q` of the basis index,
//! matching the graph module's "node 0 is the leftmost character" rule.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{input, Error, Result};
use crate::graph::{index_to_bits, MaxCutInstance};
use crate::rng::{substream, Domain};
use crate::scalar::Real;

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 24;

/// Gate kind with its qubit operands and (for rotations) angle in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate<T> {
    H(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Rx(usize, T),
    Rz(usize, T),
    Cnot { control: usize, target: usize },
    /// Explicit wait; identity unitary, occupies time on the timeline.
    Delay(usize),
}

impl<T: Copy> Gate<T> {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q)
            | Gate::X(q)
            | Gate::Y(q)
            | Gate::Z(q)
            | Gate::Rx(q, _)
            | Gate::Rz(q, _)
            | Gate::Delay(q) => vec![q],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }

    pub fn angle(&self) -> Option<T> {
        match *self {
            Gate::Rx(_, a) | Gate::Rz(_, a) => Some(a),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::X(_) => "X",
            Gate::Y(_) => "Y",
            Gate::Z(_) => "Z",
            Gate::Rx(..) => "RX",
            Gate::Rz(..) => "RZ",
            Gate::Cnot { .. } => "CNOT",
            Gate::Delay(_) => "DELAY",
        }
    }
}

/// Which pass put a gate into a circuit. Noise channels use this to decide
/// which gates are physical operations that can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Origin {
    /// Part of the algorithm itself.
    #[default]
    Program,
    /// Frame change from Pauli twirling, merged into neighbouring pulses.
    Twirl,
    /// Dynamical-decoupling pulse or spacing delay.
    Decoupling,
    /// Inserted by a noise channel.
    Error,
}

/// A gate together with its scheduling duration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateOp<T> {
    pub gate: Gate<T>,
    pub duration: Option<T>,
    pub origin: Origin,
}

impl<T: Copy> GateOp<T> {
    pub fn new(gate: Gate<T>) -> Self {
        Self {
            gate,
            duration: None,
            origin: Origin::Program,
        }
    }

    pub fn with_duration(mut self, duration: T) -> Self {
        self.duration = Some(duration);
        self
    }

    pub fn with_origin(mut self, origin: Origin) -> Self {
        self.origin = origin;
        self
    }
}

impl<T: Copy + fmt::Display> fmt::Display for GateOp<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.gate {
            Gate::Rx(q, a) | Gate::Rz(q, a) => write!(f, "{}({a}) q{q}", self.gate.name()),
            Gate::Cnot { control, target } => write!(f, "CNOT q{control},q{target}"),
            g => write!(f, "{} q{}", g.name(), g.qubits()[0]),
        }
    }
}

/// Pure state of an `n`-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    n: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// `|0…0⟩`.
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::Capacity {
                n,
                limit: MAX_QUBITS,
            });
        }
        let dim = 1usize << n;
        if index >= dim {
            return input(format!("basis index {index} out of range for {n} qubits"));
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
        amps[index] = Complex::new(T::one(), T::zero());
        Ok(Self { n, amps })
    }

    /// Basis state from a bitstring, qubit 0 leftmost.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let index = crate::graph::bits_to_index(bits)?;
        Self::basis(bits.len(), index)
    }

    /// `|+⟩^⊗n`.
    pub fn uniform(n: usize) -> Result<Self> {
        let mut s = Self::zero(n)?;
        let a = T::one() / T::from_usize(s.amps.len()).unwrap().sqrt();
        s.amps.iter_mut().for_each(|z| *z = Complex::new(a, T::zero()));
        Ok(s)
    }

    /// Wrap raw amplitudes; length must be a power of two.
    pub fn from_amplitudes(amps: Vec<Complex<T>>) -> Result<Self> {
        let dim = amps.len();
        if dim == 0 || !dim.is_power_of_two() {
            return input(format!("amplitude count {dim} is not a power of two"));
        }
        let n = dim.trailing_zeros() as usize;
        if n > MAX_QUBITS {
            return Err(Error::Capacity {
                n,
                limit: MAX_QUBITS,
            });
        }
        Ok(Self { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn probabilities(&self) -> Vec<T> {
        self.amps.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Consume the state and return its image under `op`.
    pub fn apply_gate(mut self, op: &GateOp<T>) -> Result<Self> {
        self.apply(&op.gate)?;
        Ok(self)
    }

    /// Apply a gate in place.
    pub fn apply(&mut self, gate: &Gate<T>) -> Result<()> {
        let qubits = gate.qubits();
        for &q in &qubits {
            if q >= self.n {
                return input(format!(
                    "{} acts on qubit {q} of a {}-qubit state",
                    gate.name(),
                    self.n
                ));
            }
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return input(format!("{} needs distinct qubits", gate.name()));
        }
        let zero = T::zero();
        let half = T::lit(0.5);
        let i = Complex::new(zero, T::one());
        match *gate {
            Gate::H(q) => {
                let r = T::FRAC_1_SQRT_2();
                self.pairs(q, |a, b| ((a + b) * r, (a - b) * r));
            }
            Gate::X(q) => self.pairs(q, |a, b| (b, a)),
            Gate::Y(q) => self.pairs(q, |a, b| (-i * b, i * a)),
            Gate::Z(q) => self.pairs(q, |a, b| (a, -b)),
            Gate::Rx(q, theta) => {
                let (s, c) = (theta * half).sin_cos();
                let mis = Complex::new(zero, -s);
                self.pairs(q, |a, b| (a * c + b * mis, a * mis + b * c));
            }
            Gate::Rz(q, theta) => {
                let lo = Complex::from_polar(T::one(), -theta * half);
                let hi = Complex::from_polar(T::one(), theta * half);
                self.pairs(q, |a, b| (a * lo, b * hi));
            }
            Gate::Cnot { control, target } => {
                let cm = self.mask(control);
                let tm = self.mask(target);
                for idx in 0..self.amps.len() {
                    if idx & cm != 0 && idx & tm == 0 {
                        self.amps.swap(idx, idx | tm);
                    }
                }
            }
            Gate::Delay(_) => {}
        }
        Ok(())
    }

    fn mask(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    fn pairs(&mut self, q: usize, f: impl Fn(Complex<T>, Complex<T>) -> (Complex<T>, Complex<T>)) {
        let m = self.mask(q);
        for idx in 0..self.amps.len() {
            if idx & m == 0 {
                let (a, b) = f(self.amps[idx], self.amps[idx | m]);
                self.amps[idx] = a;
                self.amps[idx | m] = b;
            }
        }
    }

    /// Exact expected cut value `Σ |a_b|² · cut(b)`.
    pub fn expectation_cut(&self, instance: &MaxCutInstance<T>) -> Result<T> {
        if instance.n() != self.n {
            return input(format!(
                "state has {} qubits but instance has {} nodes",
                self.n,
                instance.n()
            ));
        }
        Ok(self
            .amps
            .iter()
            .enumerate()
            .map(|(idx, z)| z.norm_sqr() * instance.cut_value_index(idx))
            .sum())
    }

    /// Draw `shots` basis states. Shot `s` uses its own counter-based
    /// substream, so the histogram depends only on `(state, shots, seed)`.
    pub fn sample_counts(&self, shots: u64, seed: u64) -> Result<Counts> {
        if shots == 0 {
            return input("shots must be at least 1");
        }
        let cdf = Cdf::new(&self.probabilities());
        let draws: Vec<usize> = (0..shots)
            .into_par_iter()
            .map(|s| {
                let u: f64 = substream(seed, Domain::Sampling, s).random();
                cdf.sample(u)
            })
            .collect();
        Ok(Counts::from_indices(self.n, draws))
    }
}

/// Cumulative distribution over basis indices for inverse-CDF sampling.
#[derive(Debug, Clone)]
pub struct Cdf {
    cumulative: Vec<f64>,
}

impl Cdf {
    pub fn new<T: Real>(probs: &[T]) -> Self {
        let mut acc = 0.0;
        let cumulative = probs
            .iter()
            .map(|p| {
                acc += p.as_f64().max(0.0);
                acc
            })
            .collect();
        Self { cumulative }
    }

    /// Index for a uniform variate `u ∈ [0, 1)`; robust to small norm drift.
    pub fn sample(&self, u: f64) -> usize {
        let total = *self.cumulative.last().unwrap_or(&0.0);
        let target = u * total;
        let idx = self.cumulative.partition_point(|&c| c <= target);
        // never land on a zero-probability tail entry
        idx.min(self.last_nonzero())
    }

    fn last_nonzero(&self) -> usize {
        let total = *self.cumulative.last().unwrap_or(&0.0);
        self.cumulative.partition_point(|&c| c < total)
    }
}

/// Histogram of measured bitstrings.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Counts {
    n: usize,
    shots: u64,
    counts: BTreeMap<String, u64>,
}

impl Counts {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            shots: 0,
            counts: BTreeMap::new(),
        }
    }

    /// Build from a bitstring map; every key must have length `n`.
    pub fn from_map(n: usize, counts: BTreeMap<String, u64>) -> Result<Self> {
        let mut out = Self::new(n);
        for (bits, c) in counts {
            crate::graph::parse_bits(&bits, n)?;
            out.add(bits, c);
        }
        Ok(out)
    }

    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut tally: BTreeMap<usize, u64> = BTreeMap::new();
        for idx in indices {
            *tally.entry(idx).or_default() += 1;
        }
        let mut out = Self::new(n);
        for (idx, c) in tally {
            out.add(index_to_bits(idx, n), c);
        }
        out
    }

    pub fn add(&mut self, bits: String, count: u64) {
        if count == 0 {
            return;
        }
        *self.counts.entry(bits).or_default() += count;
        self.shots += count;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn get(&self, bits: &str) -> u64 {
        self.counts.get(bits).copied().unwrap_or(0)
    }

    pub fn map(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// Empirical probability of a bitstring.
    pub fn frequency(&self, bits: &str) -> f64 {
        if self.shots == 0 {
            0.0
        } else {
            self.get(bits) as f64 / self.shots as f64
        }
    }

    /// Total empirical probability of a set of bitstrings.
    pub fn mass<'a>(&self, set: impl IntoIterator<Item = &'a String>) -> f64 {
        set.into_iter().map(|b| self.frequency(b)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn op(g: Gate<f64>) -> GateOp<f64> {
        GateOp::new(g)
    }

    #[test]
    fn hadamard_on_zero() {
        let s = StateVector::<f64>::zero(1).unwrap().apply_gate(&op(Gate::H(0))).unwrap();
        for z in s.amplitudes() {
            assert_abs_diff_eq!(z.re, 0.70710678, epsilon = 1e-8);
            assert_abs_diff_eq!(z.im, 0.0);
        }
    }

    #[test]
    fn cnot_flips_target_when_control_set() {
        let s = StateVector::<f64>::from_bits("10").unwrap();
        let s = s
            .apply_gate(&op(Gate::Cnot { control: 0, target: 1 }))
            .unwrap();
        assert_eq!(s, StateVector::from_bits("11").unwrap());
        let s = StateVector::<f64>::from_bits("01").unwrap();
        let s = s
            .apply_gate(&op(Gate::Cnot { control: 0, target: 1 }))
            .unwrap();
        assert_eq!(s, StateVector::from_bits("01").unwrap());
    }

    #[test]
    fn rz_two_pi_gives_minus_one_on_excited() {
        let s = StateVector::<f64>::from_bits("1").unwrap();
        let s = s.apply_gate(&op(Gate::Rz(0, 2.0 * PI))).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[1].re, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.amplitudes()[1].im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn rx_pi_is_x_up_to_phase() {
        let s = StateVector::<f64>::zero(1).unwrap();
        let s = s.apply_gate(&op(Gate::Rx(0, PI))).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[1].im, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn y_matrix() {
        let s = StateVector::<f64>::zero(1).unwrap().apply_gate(&op(Gate::Y(0))).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[1].im, 1.0);
    }

    #[test]
    fn invalid_qubit_is_input_error() {
        let mut s = StateVector::<f64>::zero(2).unwrap();
        assert!(matches!(s.apply(&Gate::H(2)), Err(Error::Input(_))));
        assert!(matches!(
            s.apply(&Gate::Cnot { control: 1, target: 1 }),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn expectation_examples() {
        let g = MaxCutInstance::<f64>::canonical();
        let u = StateVector::<f64>::uniform(5).unwrap();
        assert_abs_diff_eq!(u.expectation_cut(&g).unwrap(), 3.0, epsilon = 1e-12);
        let b = StateVector::<f64>::from_bits("00011").unwrap();
        assert_eq!(b.expectation_cut(&g).unwrap(), 6.0);
        let z = StateVector::<f64>::zero(5).unwrap();
        assert_eq!(z.expectation_cut(&g).unwrap(), 0.0);
        let wrong = StateVector::<f64>::zero(4).unwrap();
        assert!(wrong.expectation_cut(&g).is_err());
    }

    #[test]
    fn sampling_basis_state_is_deterministic() {
        let s = StateVector::<f64>::from_bits("11100").unwrap();
        let c = s.sample_counts(100, 9).unwrap();
        assert_eq!(c.get("11100"), 100);
        assert_eq!(c.shots(), 100);
        assert_eq!(c.map().len(), 1);
    }

    #[test]
    fn sampling_uniform_qubit_within_binomial_bound() {
        let s = StateVector::<f64>::uniform(1).unwrap();
        let c = s.sample_counts(10_000, 2024).unwrap();
        let zeros = c.get("0") as f64;
        assert!((zeros - 5000.0).abs() <= 200.0, "zeros = {zeros}");
    }

    #[test]
    fn zero_shots_rejected() {
        let s = StateVector::<f64>::uniform(1).unwrap();
        assert!(s.sample_counts(0, 1).is_err());
    }

    #[test]
    fn cdf_skips_zero_tail() {
        let cdf = Cdf::new(&[0.5f64, 0.5, 0.0, 0.0]);
        assert_eq!(cdf.sample(0.999_999_999_9), 1);
        assert_eq!(cdf.sample(0.0), 0);
        let cdf = Cdf::new(&[0.0f64, 1.0]);
        assert_eq!(cdf.sample(0.0), 1);
    }

    #[test]
    fn f32_backend_runs() {
        let s = StateVector::<f32>::zero(2).unwrap();
        let s = s.apply_gate(&GateOp::new(Gate::H(0))).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-6);
    }
}
