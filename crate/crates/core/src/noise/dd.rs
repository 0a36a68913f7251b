//! Dynamical-decoupling insertion into idle windows.

use std::fmt;
use std::str::FromStr;

use crate::ansatz::Circuit;
use crate::error::{input, Error, Result};
use crate::noise::schedule::{Slot, Timeline};
use crate::scalar::Real;
use crate::statevec::{Gate, GateOp, Origin};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DdSequence {
    /// X pulse followed by its inverse.
    XpXm,
    /// X, Y, X, Y.
    Xy4,
}

impl DdSequence {
    pub fn pulses<T>(self, qubit: usize) -> Vec<Gate<T>> {
        match self {
            DdSequence::XpXm => vec![Gate::X(qubit), Gate::X(qubit)],
            DdSequence::Xy4 => vec![Gate::X(qubit), Gate::Y(qubit), Gate::X(qubit), Gate::Y(qubit)],
        }
    }

    pub fn pulse_count(self) -> usize {
        match self {
            DdSequence::XpXm => 2,
            DdSequence::Xy4 => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DdSequence::XpXm => "XpXm",
            DdSequence::Xy4 => "XY4",
        }
    }
}

impl fmt::Display for DdSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DdSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "XpXm" => Ok(DdSequence::XpXm),
            "XY4" => Ok(DdSequence::Xy4),
            other => input(format!("unknown decoupling sequence {other:?}")),
        }
    }
}

/// Insert `sequence` into every idle gap of `timeline` that can hold its
/// pulses, using the default single-qubit pulse duration.
pub fn insert_dd<T: Real>(
    circuit: &Circuit<T>,
    timeline: &Timeline<T>,
    sequence: DdSequence,
) -> Result<Circuit<T>> {
    insert_dd_with(circuit, timeline, sequence, T::one())
}

/// As [`insert_dd`] with an explicit pulse duration.
///
/// A window of length `W` holding `k` pulses of length `τ` is filled with
/// delays so that the free time `W - kτ` is split as `f/2k, f/k, …, f/k, f/2k`
/// around the pulses. That spacing makes the signed sum of free-evolution
/// segments vanish, so a static Z drift is echoed out exactly. The filled
/// window keeps its length, so rescheduling with the same policy reproduces
/// the original timeline.
pub fn insert_dd_with<T: Real>(
    circuit: &Circuit<T>,
    timeline: &Timeline<T>,
    sequence: DdSequence,
    pulse_duration: T,
) -> Result<Circuit<T>> {
    let ops = circuit.ops();
    if timeline.op_count() != ops.len() || timeline.lanes().len() != circuit.n() {
        return input("timeline does not belong to this circuit");
    }
    let k = sequence.pulse_count();
    let pulse_total = pulse_duration * T::from_usize(k).unwrap();

    // blocks[i] = DD blocks to emit right before op i; index ops.len() = at the end
    let mut blocks: Vec<Vec<GateOp<T>>> = vec![Vec::new(); ops.len() + 1];
    for (q, lane) in timeline.lanes().iter().enumerate() {
        for (j, iv) in lane.iter().enumerate() {
            if iv.slot != Slot::Idle || iv.duration() < pulse_total {
                continue;
            }
            let before = lane[j + 1..]
                .iter()
                .find_map(|next| match next.slot {
                    Slot::Busy(i) | Slot::Delay(i) => Some(i),
                    Slot::Idle => None,
                })
                .map(|i| first_op_on_or_after(ops, q, iv.end, timeline, i))
                .unwrap_or_else(|| trailing_position(ops, q));
            blocks[before].extend(dd_block(q, iv.duration(), sequence, pulse_duration));
        }
    }

    let mut out = Circuit::new(circuit.n());
    for (i, op) in ops.iter().enumerate() {
        for g in blocks[i].drain(..) {
            out.push_unchecked(g);
        }
        out.push_unchecked(*op);
    }
    for g in blocks[ops.len()].drain(..) {
        out.push_unchecked(g);
    }
    Ok(out)
}

/// Zero-duration ops on `q` that start exactly at the window end must come
/// after the block too; the block goes before the earliest op on `q` with
/// that start time.
fn first_op_on_or_after<T: Real>(
    ops: &[GateOp<T>],
    q: usize,
    end: T,
    timeline: &Timeline<T>,
    busy: usize,
) -> usize {
    (0..busy)
        .rev()
        .take_while(|&i| !ops[i].gate.qubits().contains(&q) || timeline.op_start(i) >= end)
        .filter(|&i| ops[i].gate.qubits().contains(&q))
        .last()
        .unwrap_or(busy)
}

/// Position for a trailing window: after every op on `q`.
fn trailing_position<T: Real>(ops: &[GateOp<T>], q: usize) -> usize {
    ops.iter()
        .rposition(|op| op.gate.qubits().contains(&q))
        .map_or(0, |i| i + 1)
}

fn dd_block<T: Real>(q: usize, window: T, sequence: DdSequence, tau: T) -> Vec<GateOp<T>> {
    let k = T::from_usize(sequence.pulse_count()).unwrap();
    let free = window - tau * k;
    let edge = free / (k + k);
    let inner = free / k;
    let delay = |d: T| {
        (d > T::zero()).then(|| {
            GateOp::new(Gate::Delay(q))
                .with_duration(d)
                .with_origin(Origin::Decoupling)
        })
    };
    let pulses = sequence.pulses::<T>(q);
    let last = pulses.len() - 1;
    let mut block = Vec::new();
    block.extend(delay(edge));
    for (i, g) in pulses.into_iter().enumerate() {
        block.push(
            GateOp::new(g)
                .with_duration(tau)
                .with_origin(Origin::Decoupling),
        );
        block.extend(delay(if i == last { edge } else { inner }));
    }
    block
}
