//! Per-shot error channels: stochastic Paulis, coherent ZZ over-rotation,
//! quasi-static idle dephasing and readout flips.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::ansatz::Circuit;
use crate::error::Result;
use crate::noise::schedule::schedule_circuit;
use crate::noise::twirl::Pauli;
use crate::noise::NoiseConfig;
use crate::rng::{substream, Domain};
use crate::scalar::Real;
use crate::statevec::{Gate, GateOp, Origin};

fn error_op<T: Real>(gate: Gate<T>) -> GateOp<T> {
    GateOp::new(gate)
        .with_duration(T::zero())
        .with_origin(Origin::Error)
}

/// Quasi-static dephasing rate of each qubit for one shot.
pub fn dephasing_rates<T: Real>(sigma: T, n: usize, shot_index: u64, seed: u64) -> Vec<T> {
    if sigma <= T::zero() {
        return vec![T::zero(); n];
    }
    let normal = Normal::new(0.0, sigma.as_f64()).expect("finite sigma");
    let mut rng = substream(seed, Domain::Dephasing, shot_index);
    (0..n).map(|_| T::lit(normal.sample(&mut rng))).collect()
}

/// Rewrite `circuit` into the concrete circuit of one noisy shot.
///
/// Physical gates (program gates and decoupling pulses) may be followed by a
/// uniformly drawn non-identity Pauli; program CNOTs additionally pick up a
/// fixed `exp(-iε ZZ)`. Idle time on each qubit, including decoupling delays,
/// accumulates `RZ(2δ·d)` with `δ` fixed for the whole shot.
pub fn apply_trajectory_noise<T: Real>(
    circuit: &Circuit<T>,
    config: &NoiseConfig<T>,
    shot_index: u64,
    seed: u64,
) -> Result<Circuit<T>> {
    let n = circuit.n();
    let zero = T::zero();
    let two = T::lit(2.0);
    let p1 = config.p1q.as_f64();
    let p2 = config.p2q.as_f64();
    let dephasing = config.sigma_dephase > zero;
    let timeline = if dephasing {
        Some(schedule_circuit(circuit, config.mitigation.schedule)?)
    } else {
        None
    };
    let rates = dephasing_rates(config.sigma_dephase, n, shot_index, seed);
    let mut rng = substream(seed, Domain::Trajectory, shot_index);
    let mut last_end = vec![zero; n];
    let mut out = Circuit::new(n);

    for (i, op) in circuit.ops().iter().enumerate() {
        if let Some(t) = &timeline {
            let start = t.op_start(i);
            for q in op.gate.qubits() {
                let gap = start - last_end[q];
                if gap > zero {
                    out.push_unchecked(error_op(Gate::Rz(q, two * rates[q] * gap)));
                }
                last_end[q] = t.op_end(i);
            }
        }
        out.push_unchecked(*op);

        let physical = matches!(op.origin, Origin::Program | Origin::Decoupling);
        match op.gate {
            Gate::Delay(q) => {
                if let Some(t) = &timeline {
                    let d = t.op_end(i) - t.op_start(i);
                    if d > zero {
                        out.push_unchecked(error_op(Gate::Rz(q, two * rates[q] * d)));
                    }
                }
            }
            Gate::Cnot { control, target } if physical => {
                if config.epsilon_coherent > zero && op.origin == Origin::Program {
                    let cx = Gate::Cnot { control, target };
                    out.push_unchecked(error_op(cx));
                    out.push_unchecked(error_op(Gate::Rz(target, two * config.epsilon_coherent)));
                    out.push_unchecked(error_op(cx));
                }
                if p2 > 0.0 && rng.random::<f64>() < p2 {
                    let pair = rng.random_range(1..16usize);
                    let (pc, pt) = (Pauli::ALL[pair / 4], Pauli::ALL[pair % 4]);
                    out.extend_unchecked(pc.gate(control).map(error_op));
                    out.extend_unchecked(pt.gate(target).map(error_op));
                }
            }
            g if physical && p1 > 0.0 => {
                if rng.random::<f64>() < p1 {
                    let q = g.qubits()[0];
                    let pauli = Pauli::ALL[rng.random_range(1..4usize)];
                    out.extend_unchecked(pauli.gate(q).map(error_op));
                }
            }
            _ => {}
        }
    }

    if let Some(t) = &timeline {
        for q in 0..n {
            let gap = t.makespan() - last_end[q];
            if gap > zero {
                out.push_unchecked(error_op(Gate::Rz(q, two * rates[q] * gap)));
            }
        }
    }
    Ok(out)
}

/// Flip each bit independently with probability `p_readout`.
pub fn apply_readout_error(bits: &str, p_readout: f64, shot_index: u64, seed: u64) -> String {
    if p_readout <= 0.0 {
        return bits.to_string();
    }
    let mut rng = substream(seed, Domain::Readout, shot_index);
    bits.chars()
        .map(|c| {
            let flip = rng.random::<f64>() < p_readout;
            match (c, flip) {
                ('0', true) => '1',
                ('1', true) => '0',
                (c, _) => c,
            }
        })
        .collect()
}

/// Index-level readout flips: bit `n - 1 - q` is qubit `q`.
pub(crate) fn flip_index(index: usize, n: usize, p_readout: f64, shot_index: u64, seed: u64) -> usize {
    if p_readout <= 0.0 {
        return index;
    }
    let mut rng = substream(seed, Domain::Readout, shot_index);
    let mut out = index;
    for q in 0..n {
        if rng.random::<f64>() < p_readout {
            out ^= 1 << (n - 1 - q);
        }
    }
    out
}
