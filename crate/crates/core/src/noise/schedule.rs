//! Greedy list scheduling of a circuit onto a per-qubit timeline.

use std::str::FromStr;

use crate::ansatz::Circuit;
use crate::error::{input, Error, Result};
use crate::scalar::Real;
use crate::statevec::Gate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SchedulePolicy {
    Asap,
    #[default]
    Alap,
}

impl FromStr for SchedulePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "asap" => Ok(Self::Asap),
            "alap" => Ok(Self::Alap),
            other => input(format!("unknown scheduling policy {other:?}")),
        }
    }
}

/// What occupies an interval on one qubit's timeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    /// A gate, by index into the circuit's op list.
    Busy(usize),
    /// An explicit delay op; idle from the qubit's point of view.
    Delay(usize),
    /// Gap with nothing scheduled.
    Idle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    pub start: T,
    pub end: T,
    pub slot: Slot,
}

impl<T: Real> Interval<T> {
    pub fn duration(&self) -> T {
        self.end - self.start
    }

    pub fn is_idle(&self) -> bool {
        !matches!(self.slot, Slot::Busy(_))
    }
}

/// Per-qubit tiling of `[0, makespan)` into busy and idle intervals.
///
/// Zero-duration ops get a start time but no interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Timeline<T> {
    makespan: T,
    lanes: Vec<Vec<Interval<T>>>,
    op_start: Vec<T>,
    op_end: Vec<T>,
}

impl<T: Real> Timeline<T> {
    pub fn makespan(&self) -> T {
        self.makespan
    }

    pub fn lane(&self, qubit: usize) -> &[Interval<T>] {
        &self.lanes[qubit]
    }

    pub fn lanes(&self) -> &[Vec<Interval<T>>] {
        &self.lanes
    }

    pub fn op_start(&self, op: usize) -> T {
        self.op_start[op]
    }

    pub fn op_end(&self, op: usize) -> T {
        self.op_end[op]
    }

    pub fn op_count(&self) -> usize {
        self.op_start.len()
    }

    pub fn busy_time(&self, qubit: usize) -> T {
        self.lanes[qubit]
            .iter()
            .filter(|iv| !iv.is_idle())
            .map(Interval::duration)
            .sum()
    }

    pub fn idle_time(&self, qubit: usize) -> T {
        self.lanes[qubit]
            .iter()
            .filter(|iv| iv.is_idle())
            .map(Interval::duration)
            .sum()
    }
}

/// Schedule every op as early (or late) as its per-qubit predecessors (or
/// successors) allow. Both policies share the critical path, hence the
/// makespan.
pub fn schedule_circuit<T: Real>(circuit: &Circuit<T>, policy: SchedulePolicy) -> Result<Timeline<T>> {
    let ops = circuit.ops();
    let mut durations = Vec::with_capacity(ops.len());
    for (i, op) in ops.iter().enumerate() {
        match op.duration {
            Some(d) if d >= T::zero() => durations.push(d),
            Some(_) => return input(format!("op {i} ({op}) has a negative duration")),
            None => return input(format!("op {i} ({op}) has no duration")),
        }
    }
    let n = circuit.n();
    let zero = T::zero();
    let mut op_start = vec![zero; ops.len()];
    let mut op_end = vec![zero; ops.len()];

    let mut free = vec![zero; n];
    for (i, op) in ops.iter().enumerate() {
        let qs = op.gate.qubits();
        let start = qs.iter().map(|&q| free[q]).fold(zero, T::max);
        let end = start + durations[i];
        qs.iter().for_each(|&q| free[q] = end);
        op_start[i] = start;
        op_end[i] = end;
    }
    let makespan = free.iter().copied().fold(zero, T::max);

    if policy == SchedulePolicy::Alap {
        let mut avail = vec![makespan; n];
        for (i, op) in ops.iter().enumerate().rev() {
            let qs = op.gate.qubits();
            let end = qs.iter().map(|&q| avail[q]).fold(makespan, T::min);
            let start = end - durations[i];
            qs.iter().for_each(|&q| avail[q] = start);
            op_start[i] = start;
            op_end[i] = end;
        }
    }

    let mut lanes: Vec<Vec<Interval<T>>> = vec![Vec::new(); n];
    let mut cursor = vec![zero; n];
    for (i, op) in ops.iter().enumerate() {
        if durations[i] == zero {
            continue;
        }
        let slot = match op.gate {
            Gate::Delay(_) => Slot::Delay(i),
            _ => Slot::Busy(i),
        };
        for q in op.gate.qubits() {
            if op_start[i] > cursor[q] {
                lanes[q].push(Interval {
                    start: cursor[q],
                    end: op_start[i],
                    slot: Slot::Idle,
                });
            }
            lanes[q].push(Interval {
                start: op_start[i],
                end: op_end[i],
                slot,
            });
            cursor[q] = op_end[i];
        }
    }
    for (q, lane) in lanes.iter_mut().enumerate() {
        if makespan > cursor[q] {
            lane.push(Interval {
                start: cursor[q],
                end: makespan,
                slot: Slot::Idle,
            });
        }
    }

    Ok(Timeline {
        makespan,
        lanes,
        op_start,
        op_end,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{build_qaoa_circuit, QaoaParams};
    use crate::graph::MaxCutInstance;
    use crate::statevec::GateOp;

    fn op(g: Gate<f64>, d: f64) -> GateOp<f64> {
        GateOp::new(g).with_duration(d)
    }

    #[test]
    fn fully_packed_two_qubit_circuit() {
        let c = Circuit::from_ops(
            2,
            vec![
                op(Gate::H(0), 1.0),
                op(Gate::H(1), 1.0),
                op(Gate::Cnot { control: 0, target: 1 }, 4.0),
            ],
        )
        .unwrap();
        for policy in [SchedulePolicy::Asap, SchedulePolicy::Alap] {
            let t = schedule_circuit(&c, policy).unwrap();
            assert_eq!(t.makespan(), 5.0);
            assert_eq!(t.idle_time(0), 0.0);
            assert_eq!(t.idle_time(1), 0.0);
        }
    }

    #[test]
    fn dependency_forces_gap_on_target() {
        let c = Circuit::from_ops(
            2,
            vec![op(Gate::H(0), 1.0), op(Gate::Cnot { control: 0, target: 1 }, 4.0)],
        )
        .unwrap();
        let t = schedule_circuit(&c, SchedulePolicy::Asap).unwrap();
        assert_eq!(
            t.lane(1)[0],
            Interval {
                start: 0.0,
                end: 1.0,
                slot: Slot::Idle
            }
        );
        assert_eq!(t.makespan(), 5.0);
    }

    #[test]
    fn alap_moves_idle_to_the_front() {
        let c = Circuit::from_ops(
            2,
            vec![op(Gate::H(0), 1.0), op(Gate::H(0), 1.0), op(Gate::X(1), 1.0)],
        )
        .unwrap();
        let asap = schedule_circuit(&c, SchedulePolicy::Asap).unwrap();
        let alap = schedule_circuit(&c, SchedulePolicy::Alap).unwrap();
        assert_eq!(asap.makespan(), alap.makespan());
        assert_eq!(asap.lane(1)[1].slot, Slot::Idle);
        assert_eq!(alap.lane(1)[0].slot, Slot::Idle);
        assert_eq!(alap.op_start(2), 1.0);
    }

    #[test]
    fn canonical_p1_lanes_sum_to_makespan() {
        let g = MaxCutInstance::<f64>::canonical();
        let c = build_qaoa_circuit(&g, &QaoaParams::new(vec![0.4], vec![0.8]).unwrap());
        for policy in [SchedulePolicy::Asap, SchedulePolicy::Alap] {
            let t = schedule_circuit(&c, policy).unwrap();
            for q in 0..5 {
                assert_eq!(t.busy_time(q) + t.idle_time(q), t.makespan());
                let lane = t.lane(q);
                assert_eq!(lane.first().unwrap().start, 0.0);
                assert_eq!(lane.last().unwrap().end, t.makespan());
                for w in lane.windows(2) {
                    assert_eq!(w[0].end, w[1].start);
                }
            }
        }
    }

    #[test]
    fn missing_duration_is_an_error() {
        let c = Circuit::from_ops(1, vec![GateOp::new(Gate::<f64>::H(0))]).unwrap();
        assert!(matches!(
            schedule_circuit(&c, SchedulePolicy::Asap),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn policy_parsing() {
        assert_eq!("ALAP".parse::<SchedulePolicy>().unwrap(), SchedulePolicy::Alap);
        assert!("later".parse::<SchedulePolicy>().is_err());
    }
}
