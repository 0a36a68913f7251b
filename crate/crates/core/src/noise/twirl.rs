//! Pauli twirling of CNOT gates.

use rand::Rng;

use crate::ansatz::Circuit;
use crate::rng::{substream, Domain};
use crate::scalar::Real;
use crate::statevec::{Gate, GateOp, Origin};

/// Single-qubit Pauli in symplectic form; `(false, false)` is identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pauli {
    pub x: bool,
    pub z: bool,
}

impl Pauli {
    pub const I: Pauli = Pauli { x: false, z: false };
    pub const X: Pauli = Pauli { x: true, z: false };
    pub const Y: Pauli = Pauli { x: true, z: true };
    pub const Z: Pauli = Pauli { x: false, z: true };
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn is_identity(self) -> bool {
        !self.x && !self.z
    }

    pub fn gate<T>(self, qubit: usize) -> Option<Gate<T>> {
        match (self.x, self.z) {
            (false, false) => None,
            (true, false) => Some(Gate::X(qubit)),
            (true, true) => Some(Gate::Y(qubit)),
            (false, true) => Some(Gate::Z(qubit)),
        }
    }
}

/// `CNOT · (P_c ⊗ P_t) · CNOT` up to phase.
pub fn conjugate_by_cnot(control: Pauli, target: Pauli) -> (Pauli, Pauli) {
    (
        Pauli {
            x: control.x,
            z: control.z ^ target.z,
        },
        Pauli {
            x: target.x ^ control.x,
            z: target.z,
        },
    )
}

/// Wrap every non-error CNOT in a random Pauli frame: `P_pre`, CNOT, `P_post`
/// with `P_post = CNOT · P_pre · CNOT`, so the ideal unitary is unchanged up
/// to global phase. Frame gates take zero time.
pub fn twirl_circuit<T: Real>(circuit: &Circuit<T>, seed: u64) -> Circuit<T> {
    let mut rng = substream(seed, Domain::Twirl, 0);
    let mut out = Circuit::new(circuit.n());
    let frame = |g: Gate<T>| {
        GateOp::new(g)
            .with_duration(T::zero())
            .with_origin(Origin::Twirl)
    };
    for op in circuit.ops() {
        let Gate::Cnot { control, target } = op.gate else {
            out.push_unchecked(*op);
            continue;
        };
        if op.origin == Origin::Error {
            out.push_unchecked(*op);
            continue;
        }
        let pair: usize = rng.random_range(0..16);
        let (pc, pt) = (Pauli::ALL[pair / 4], Pauli::ALL[pair % 4]);
        let (qc, qt) = conjugate_by_cnot(pc, pt);
        for g in [pc.gate(control), pt.gate(target)].into_iter().flatten() {
            out.push_unchecked(frame(g));
        }
        out.push_unchecked(*op);
        for g in [qc.gate(control), qt.gate(target)].into_iter().flatten() {
            out.push_unchecked(frame(g));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::StateVector;

    /// Dense 4×4 check of the conjugation table, independent of the
    /// symplectic rule: for every basis input, `post · CNOT · pre` must equal
    /// `CNOT` up to one global phase.
    #[test]
    fn conjugation_table_preserves_cnot() {
        for pc in Pauli::ALL {
            for pt in Pauli::ALL {
                let (qc, qt) = conjugate_by_cnot(pc, pt);
                let mut ops = Vec::new();
                ops.extend(pc.gate::<f64>(0));
                ops.extend(pt.gate::<f64>(1));
                ops.push(Gate::Cnot { control: 0, target: 1 });
                ops.extend(qc.gate::<f64>(0));
                ops.extend(qt.gate::<f64>(1));
                let mut phase = None;
                for idx in 0..4 {
                    let mut a = StateVector::<f64>::basis(2, idx).unwrap();
                    let mut b = a.clone();
                    for g in &ops {
                        a.apply(g).unwrap();
                    }
                    b.apply(&Gate::Cnot { control: 0, target: 1 }).unwrap();
                    let (j, bz) = b
                        .amplitudes()
                        .iter()
                        .enumerate()
                        .find(|(_, z)| z.norm() > 0.5)
                        .unwrap();
                    let ratio = a.amplitudes()[j] / bz;
                    assert!((ratio.norm() - 1.0).abs() < 1e-12);
                    let ph = *phase.get_or_insert(ratio);
                    assert!((ratio - ph).norm() < 1e-12, "{pc:?}{pt:?} idx {idx}");
                }
            }
        }
    }

    #[test]
    fn circuits_without_cnots_are_unchanged() {
        let c = Circuit::from_ops(
            2,
            vec![GateOp::new(Gate::H(0)), GateOp::new(Gate::Rx(1, 0.3))],
        )
        .unwrap();
        assert_eq!(twirl_circuit(&c, 11), c);
    }

    #[test]
    fn twirl_is_seed_deterministic() {
        let c = Circuit::<f64>::from_ops(
            2,
            vec![GateOp::new(Gate::Cnot { control: 0, target: 1 }); 8],
        )
        .unwrap();
        assert_eq!(twirl_circuit(&c, 3), twirl_circuit(&c, 3));
        assert_ne!(twirl_circuit(&c, 3), twirl_circuit(&c, 4));
    }
}
