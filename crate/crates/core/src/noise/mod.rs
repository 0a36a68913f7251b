//! Parametric noise and error-mitigation passes.
//!
//! Noise is simulated by Monte Carlo trajectories over pure states. For shot
//! `s` the pipeline is: optional Pauli twirl, optional scheduling plus
//! dynamical-decoupling insertion, trajectory noise, exact simulation, one
//! inverse-CDF draw, readout flips. Every random choice is addressed by
//! `(seed, s)`, so counts do not depend on thread count.

pub mod channel;
pub mod dd;
pub mod schedule;
pub mod twirl;

use rand::Rng;
use rayon::prelude::*;

pub use channel::{apply_readout_error, apply_trajectory_noise, dephasing_rates};
pub use dd::{insert_dd, insert_dd_with, DdSequence};
pub use schedule::{schedule_circuit, Interval, SchedulePolicy, Slot, Timeline};
pub use twirl::{conjugate_by_cnot, twirl_circuit, Pauli};

use crate::ansatz::Circuit;
use crate::error::{input, Result};
use crate::rng::{derive_seed, substream, Domain};
use crate::scalar::Real;
use crate::statevec::{Cdf, Counts};

/// Mitigation toggles applied before noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Mitigation {
    pub twirling: bool,
    pub dd: Option<DdSequence>,
    /// Scheduling used for decoupling windows and idle dephasing.
    pub schedule: SchedulePolicy,
}

/// Error-channel parameters; all-zero means noiseless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseConfig<T> {
    /// Pauli probability after each single-qubit gate.
    pub p1q: T,
    /// Two-qubit Pauli probability after each CNOT.
    pub p2q: T,
    /// Independent per-qubit measurement flip probability.
    pub p_readout: T,
    /// Systematic ZZ over-rotation (radians) after each CNOT.
    pub epsilon_coherent: T,
    /// Std-dev of the per-shot idle Z drift, radians per unit time.
    pub sigma_dephase: T,
    pub mitigation: Mitigation,
}

impl<T: Real> Default for NoiseConfig<T> {
    fn default() -> Self {
        Self {
            p1q: T::zero(),
            p2q: T::zero(),
            p_readout: T::zero(),
            epsilon_coherent: T::zero(),
            sigma_dephase: T::zero(),
            mitigation: Mitigation::default(),
        }
    }
}

impl<T: Real> NoiseConfig<T> {
    /// Published upper bounds for a superconducting device: 0.5 % 1q,
    /// 2.5 % 2q and 5 % readout error.
    pub fn ibm_bounds() -> Self {
        Self {
            p1q: T::lit(0.005),
            p2q: T::lit(0.025),
            p_readout: T::lit(0.05),
            ..Self::default()
        }
    }

    pub fn coherent_only(epsilon: T) -> Self {
        Self {
            epsilon_coherent: epsilon,
            ..Self::default()
        }
    }

    pub fn dephase_only(sigma: T) -> Self {
        Self {
            sigma_dephase: sigma,
            ..Self::default()
        }
    }

    pub fn with_mitigation(mut self, mitigation: Mitigation) -> Self {
        self.mitigation = mitigation;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("p1q", self.p1q),
            ("p2q", self.p2q),
            ("p_readout", self.p_readout),
        ] {
            if !(p >= T::zero() && p <= T::one()) {
                return input(format!("{name} = {p} is not a probability"));
            }
        }
        for (name, v) in [
            ("epsilon_coherent", self.epsilon_coherent),
            ("sigma_dephase", self.sigma_dephase),
        ] {
            if !(v >= T::zero()) || !v.is_finite() {
                return input(format!("{name} = {v} must be finite and non-negative"));
            }
        }
        Ok(())
    }

    /// True when every shot sees the same circuit.
    fn is_shot_invariant(&self) -> bool {
        self.p1q == T::zero()
            && self.p2q == T::zero()
            && self.sigma_dephase == T::zero()
            && !self.mitigation.twirling
    }
}

/// Concrete circuit executed by shot `shot_index`: mitigation passes followed
/// by trajectory noise. Readout error is not part of the circuit.
pub fn shot_circuit<T: Real>(
    circuit: &Circuit<T>,
    config: &NoiseConfig<T>,
    shot_index: u64,
    seed: u64,
) -> Result<Circuit<T>> {
    let mut c = if config.mitigation.twirling {
        twirl_circuit(circuit, derive_seed(seed, Domain::Twirl, shot_index))
    } else {
        circuit.clone()
    };
    if let Some(seq) = config.mitigation.dd {
        let timeline = schedule_circuit(&c, config.mitigation.schedule)?;
        c = insert_dd(&c, &timeline, seq)?;
    }
    apply_trajectory_noise(&c, config, shot_index, seed)
}

/// Sample `shots` noisy executions of `circuit`.
pub fn run_noisy<T: Real>(
    circuit: &Circuit<T>,
    config: &NoiseConfig<T>,
    shots: u64,
    seed: u64,
) -> Result<Counts> {
    config.validate()?;
    if shots == 0 {
        return input("shots must be at least 1");
    }
    let n = circuit.n();
    let p_readout = config.p_readout.as_f64();
    let measure = |cdf: &Cdf, s: u64| {
        let u: f64 = substream(seed, Domain::Sampling, s).random();
        channel::flip_index(cdf.sample(u), n, p_readout, s, seed)
    };

    let draws: Vec<usize> = if config.is_shot_invariant() {
        let state = shot_circuit(circuit, config, 0, seed)?.simulate()?;
        let cdf = Cdf::new(&state.probabilities());
        (0..shots).into_par_iter().map(|s| measure(&cdf, s)).collect()
    } else {
        (0..shots)
            .into_par_iter()
            .map(|s| {
                let state = shot_circuit(circuit, config, s, seed)?.simulate()?;
                Ok(measure(&Cdf::new(&state.probabilities()), s))
            })
            .collect::<Result<_>>()?
    };
    Ok(Counts::from_indices(n, draws))
}
