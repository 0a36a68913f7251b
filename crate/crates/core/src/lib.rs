//! QAOA for MaxCut on a dense statevector simulator.
//!
//! The numeric core is generic over the scalar type: graphs over any
//! [`Weight`] (floats, integers, rationals), simulation and optimization over
//! any [`Real`] (`f32`, `f64`). Concrete aliases for both precisions are
//! exported below.
//!
//! Pipeline: [`graph`] defines the cut function and the exhaustive oracle,
//! [`ansatz`] builds and runs depth-p circuits on [`statevec`], [`noise`]
//! rewrites circuits per shot (error channels plus twirling and dynamical
//! decoupling), [`objective`] turns runs into energies, and [`optim`]
//! minimizes them.

pub mod ansatz;
pub mod error;
pub mod graph;
pub mod noise;
pub mod objective;
pub mod optim;
pub mod rng;
pub mod scalar;
pub mod statevec;

pub use ansatz::{build_qaoa_circuit, run_circuit, DurationTable, RunMode, RunOutput};
pub use error::{Error, Result};
pub use graph::{brute_force_maxcut, BruteForce};
pub use noise::{DdSequence, Mitigation, SchedulePolicy};
pub use objective::{energy_from_counts, evaluate_qaoa, QaoaObjective, Status};
pub use optim::{minimize, Method, MinimizeProblem, MinimizeResult, Options};
pub use scalar::{Real, Weight};
pub use statevec::{Counts, Gate, GateOp, Origin};

pub type MaxCutInstance = graph::MaxCutInstance<f64>;
pub type MaxCutInstanceF32 = graph::MaxCutInstance<f32>;
pub type StateVector = statevec::StateVector<f64>;
pub type StateVectorF32 = statevec::StateVector<f32>;
pub type Circuit = ansatz::Circuit<f64>;
pub type CircuitF32 = ansatz::Circuit<f32>;
pub type QaoaParams = ansatz::QaoaParams<f64>;
pub type QaoaParamsF32 = ansatz::QaoaParams<f32>;
pub type NoiseConfig = noise::NoiseConfig<f64>;
pub type NoiseConfigF32 = noise::NoiseConfig<f32>;
pub type OptimizationTrace = objective::OptimizationTrace<f64>;
