//! Depth-p QAOA circuits for MaxCut and their execution.

use crate::error::{input, Result};
use crate::graph::MaxCutInstance;
use crate::noise::{self, NoiseConfig};
use crate::scalar::Real;
use crate::statevec::{Counts, Gate, GateOp, StateVector};

/// Variational angles. The flat layout is `(β₁..β_p, γ₁..γ_p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QaoaParams<T> {
    betas: Vec<T>,
    gammas: Vec<T>,
}

impl<T: Real> QaoaParams<T> {
    pub fn new(betas: Vec<T>, gammas: Vec<T>) -> Result<Self> {
        if betas.len() != gammas.len() {
            return input(format!(
                "{} betas but {} gammas",
                betas.len(),
                gammas.len()
            ));
        }
        Ok(Self { betas, gammas })
    }

    /// Split a flat `(β…, γ…)` vector; its length must be even.
    pub fn from_flat(theta: &[T]) -> Result<Self> {
        if theta.len() % 2 != 0 {
            return input(format!("flat parameter vector has odd length {}", theta.len()));
        }
        let (b, g) = theta.split_at(theta.len() / 2);
        Self::new(b.to_vec(), g.to_vec())
    }

    pub fn to_flat(&self) -> Vec<T> {
        self.betas.iter().chain(&self.gammas).copied().collect()
    }

    pub fn depth(&self) -> usize {
        self.betas.len()
    }

    pub fn betas(&self) -> &[T] {
        &self.betas
    }

    pub fn gammas(&self) -> &[T] {
        &self.gammas
    }
}

/// Gate durations in dimensionless time units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DurationTable<T> {
    pub single_qubit: T,
    pub cnot: T,
}

impl<T: Real> Default for DurationTable<T> {
    fn default() -> Self {
        Self {
            single_qubit: T::one(),
            cnot: T::lit(4.0),
        }
    }
}

impl<T: Real> DurationTable<T> {
    pub fn duration_of(&self, gate: &Gate<T>) -> T {
        if gate.is_two_qubit() {
            self.cnot
        } else {
            self.single_qubit
        }
    }

    pub fn op(&self, gate: Gate<T>) -> GateOp<T> {
        GateOp::new(gate).with_duration(self.duration_of(&gate))
    }
}

/// Ordered gate list over `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit<T> {
    n: usize,
    ops: Vec<GateOp<T>>,
}

impl<T: Real> Circuit<T> {
    pub fn new(n: usize) -> Self {
        Self { n, ops: Vec::new() }
    }

    /// Build from ops, validating every qubit reference.
    pub fn from_ops(n: usize, ops: Vec<GateOp<T>>) -> Result<Self> {
        let mut c = Self::new(n);
        for op in ops {
            c.push(op)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, op: GateOp<T>) -> Result<()> {
        let qubits = op.gate.qubits();
        if let Some(&q) = qubits.iter().find(|&&q| q >= self.n) {
            return input(format!("{op} references qubit {q} >= {}", self.n));
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return input(format!("{op} needs distinct qubits"));
        }
        self.ops.push(op);
        Ok(())
    }

    pub(crate) fn push_unchecked(&mut self, op: GateOp<T>) {
        self.ops.push(op);
    }

    pub(crate) fn extend_unchecked(&mut self, ops: impl IntoIterator<Item = GateOp<T>>) {
        self.ops.extend(ops);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ops(&self) -> &[GateOp<T>] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn cnot_count(&self) -> usize {
        self.ops.iter().filter(|op| op.gate.is_two_qubit()).count()
    }

    /// Run the circuit on `|0…0⟩`.
    pub fn simulate(&self) -> Result<StateVector<T>> {
        let mut state = StateVector::zero(self.n)?;
        for op in &self.ops {
            state.apply(&op.gate)?;
        }
        Ok(state)
    }
}

/// Standard QAOA ansatz with default durations.
pub fn build_qaoa_circuit<T: Real>(
    instance: &MaxCutInstance<T>,
    params: &QaoaParams<T>,
) -> Circuit<T> {
    build_qaoa_circuit_with(instance, params, &DurationTable::default())
}

/// Hadamard layer, then per layer: `CNOT(u,v) · RZ_v(2 w γ) · CNOT(u,v)` for
/// each edge in instance order, followed by `RX(2β)` on every qubit.
/// Gate count is `n + p(3|E| + n)`.
pub fn build_qaoa_circuit_with<T: Real>(
    instance: &MaxCutInstance<T>,
    params: &QaoaParams<T>,
    durations: &DurationTable<T>,
) -> Circuit<T> {
    let n = instance.n();
    let two = T::lit(2.0);
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.push_unchecked(durations.op(Gate::H(q)));
    }
    for (&beta, &gamma) in params.betas().iter().zip(params.gammas()) {
        for (u, v, w) in instance.weighted_edges() {
            let cx = Gate::Cnot { control: u, target: v };
            c.push_unchecked(durations.op(cx));
            c.push_unchecked(durations.op(Gate::Rz(v, two * w * gamma)));
            c.push_unchecked(durations.op(cx));
        }
        for q in 0..n {
            c.push_unchecked(durations.op(Gate::Rx(q, two * beta)));
        }
    }
    c
}

/// How to execute a circuit.
#[derive(Debug, Clone, PartialEq)]
pub enum RunMode<T> {
    /// Return the final statevector.
    Exact,
    /// Sample the noiseless final state.
    Sampled { shots: u64, seed: u64 },
    /// One independent noise trajectory per shot.
    Noisy {
        config: NoiseConfig<T>,
        shots: u64,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunOutput<T> {
    State(StateVector<T>),
    Counts(Counts),
}

impl<T> RunOutput<T> {
    pub fn into_counts(self) -> Option<Counts> {
        match self {
            RunOutput::Counts(c) => Some(c),
            RunOutput::State(_) => None,
        }
    }

    pub fn into_state(self) -> Option<StateVector<T>> {
        match self {
            RunOutput::State(s) => Some(s),
            RunOutput::Counts(_) => None,
        }
    }
}

pub fn run_circuit<T: Real>(circuit: &Circuit<T>, mode: &RunMode<T>) -> Result<RunOutput<T>> {
    match mode {
        RunMode::Exact => Ok(RunOutput::State(circuit.simulate()?)),
        RunMode::Sampled { shots, seed } => {
            let state = circuit.simulate()?;
            Ok(RunOutput::Counts(state.sample_counts(*shots, *seed)?))
        }
        RunMode::Noisy {
            config,
            shots,
            seed,
        } => Ok(RunOutput::Counts(noise::run_noisy(
            circuit, config, *shots, *seed,
        )?)),
    }
}
