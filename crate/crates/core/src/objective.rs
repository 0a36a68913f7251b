//! Energies from counts, the end-to-end QAOA objective and optimization
//! traces.
//!
//! Energy is the negated average cut, so lower is better and the canonical
//! instance bottoms out at −6.

use std::fmt;

use crate::ansatz::{build_qaoa_circuit, run_circuit, QaoaParams, RunMode, RunOutput};
use crate::error::{input, Result};
use crate::graph::MaxCutInstance;
use crate::rng::{derive_seed, Domain};
use crate::scalar::Real;
use crate::statevec::Counts;

/// How an optimization run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    BudgetExhausted,
    Stalled,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::BudgetExhausted => "budget_exhausted",
            Status::Stalled => "stalled",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord<T> {
    pub eval: usize,
    pub theta: Vec<T>,
    pub energy: T,
}

/// One record per objective evaluation, in evaluation order.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationTrace<T> {
    pub method: String,
    pub status: Option<Status>,
    records: Vec<TraceRecord<T>>,
}

impl<T: Real> OptimizationTrace<T> {
    pub fn new(method: impl Into<String>) -> Self {
        Self {
            method: method.into(),
            status: None,
            records: Vec::new(),
        }
    }

    pub fn push(&mut self, theta: &[T], energy: T) {
        let eval = self.records.len();
        self.records.push(TraceRecord {
            eval,
            theta: theta.to_vec(),
            energy,
        });
    }

    pub fn records(&self) -> &[TraceRecord<T>] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Lowest recorded energy, ignoring NaNs.
    pub fn best(&self) -> Option<&TraceRecord<T>> {
        self.records
            .iter()
            .filter(|r| !r.energy.is_nan())
            .min_by(|a, b| a.energy.partial_cmp(&b.energy).unwrap())
    }
}

/// Energy estimate together with the counts it came from (if sampled).
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySample<T> {
    pub energy: T,
    pub shots: Option<u64>,
    pub counts: Option<Counts>,
}

/// `-(Σ_b count(b) · cut(b)) / shots`.
pub fn energy_from_counts<T: Real>(counts: &Counts, instance: &MaxCutInstance<T>) -> Result<T> {
    if counts.shots() == 0 {
        return input("counts are empty");
    }
    if counts.n() != instance.n() {
        return input(format!(
            "counts over {} bits but instance has {} nodes",
            counts.n(),
            instance.n()
        ));
    }
    let mut total = T::zero();
    for (bits, c) in counts.iter() {
        total = total + instance.cut_value(bits)? * T::from_u64(c).unwrap();
    }
    Ok(-total / T::from_u64(counts.shots()).unwrap())
}

/// Build, run and score one parameter vector. Appends to `trace` when given.
pub fn evaluate_qaoa<T: Real>(
    instance: &MaxCutInstance<T>,
    params: &QaoaParams<T>,
    mode: &RunMode<T>,
    trace: Option<&mut OptimizationTrace<T>>,
) -> Result<EnergySample<T>> {
    let circuit = build_qaoa_circuit(instance, params);
    let sample = match run_circuit(&circuit, mode)? {
        RunOutput::State(state) => EnergySample {
            energy: -state.expectation_cut(instance)?,
            shots: None,
            counts: None,
        },
        RunOutput::Counts(counts) => EnergySample {
            energy: energy_from_counts(&counts, instance)?,
            shots: Some(counts.shots()),
            counts: Some(counts),
        },
    };
    if let Some(trace) = trace {
        trace.push(&params.to_flat(), sample.energy);
    }
    Ok(sample)
}

/// QAOA energy as a function of the flat parameter vector, suitable for the
/// optimizers. Stochastic modes reseed every call from `(seed, call index)`,
/// so a whole optimization run is reproducible.
#[derive(Debug, Clone)]
pub struct QaoaObjective<T> {
    instance: MaxCutInstance<T>,
    depth: usize,
    mode: RunMode<T>,
    calls: u64,
}

impl<T: Real> QaoaObjective<T> {
    pub fn new(instance: MaxCutInstance<T>, depth: usize, mode: RunMode<T>) -> Result<Self> {
        match &mode {
            RunMode::Exact => {}
            RunMode::Sampled { shots, .. } if *shots > 0 => {}
            RunMode::Noisy { config, shots, .. } if *shots > 0 => config.validate()?,
            _ => return input("objective needs at least one shot"),
        }
        Ok(Self {
            instance,
            depth,
            mode,
            calls: 0,
        })
    }

    pub fn instance(&self) -> &MaxCutInstance<T> {
        &self.instance
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn is_stochastic(&self) -> bool {
        !matches!(self.mode, RunMode::Exact)
    }

    pub fn calls(&self) -> u64 {
        self.calls
    }

    fn mode_for_call(&self, call: u64) -> RunMode<T> {
        let reseed = |seed: u64| derive_seed(seed, Domain::Evaluation, call);
        match &self.mode {
            RunMode::Exact => RunMode::Exact,
            RunMode::Sampled { shots, seed } => RunMode::Sampled {
                shots: *shots,
                seed: reseed(*seed),
            },
            RunMode::Noisy {
                config,
                shots,
                seed,
            } => RunMode::Noisy {
                config: *config,
                shots: *shots,
                seed: reseed(*seed),
            },
        }
    }

    pub fn energy(&mut self, theta: &[T]) -> Result<T> {
        if theta.len() != 2 * self.depth {
            return input(format!(
                "expected {} parameters, got {}",
                2 * self.depth,
                theta.len()
            ));
        }
        let params = QaoaParams::from_flat(theta)?;
        let mode = self.mode_for_call(self.calls);
        self.calls += 1;
        Ok(evaluate_qaoa(&self.instance, &params, &mode, None)?.energy)
    }

    /// Infallible view for the optimizers; `theta` length is the caller's
    /// contract and the mode was validated at construction.
    pub fn as_fn(&mut self) -> impl FnMut(&[T]) -> T + '_ {
        move |theta| self.energy(theta).expect("valid QAOA objective call")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::collections::BTreeMap;

    fn canonical() -> MaxCutInstance<f64> {
        MaxCutInstance::canonical()
    }

    fn counts(pairs: &[(&str, u64)]) -> Counts {
        let map: BTreeMap<String, u64> = pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        Counts::from_map(5, map).unwrap()
    }

    #[test]
    fn energy_examples() {
        let g = canonical();
        assert_eq!(energy_from_counts(&counts(&[("00011", 100)]), &g).unwrap(), -6.0);
        assert_eq!(
            energy_from_counts(&counts(&[("00000", 50), ("00011", 50)]), &g).unwrap(),
            -3.0
        );
        let uniform = Counts::from_indices(5, 0..32);
        assert_abs_diff_eq!(energy_from_counts(&uniform, &g).unwrap(), -3.0, epsilon = 1e-12);
        assert!(energy_from_counts(&Counts::new(5), &g).is_err());
    }

    #[test]
    fn evaluate_trivial_points() {
        let g = canonical();
        let p0 = QaoaParams::new(vec![], vec![]).unwrap();
        let e = evaluate_qaoa(&g, &p0, &RunMode::Exact, None).unwrap();
        assert_abs_diff_eq!(e.energy, -3.0, epsilon = 1e-12);
        let p1 = QaoaParams::new(vec![1.234], vec![0.0]).unwrap();
        let mut trace = OptimizationTrace::new("manual");
        let e = evaluate_qaoa(&g, &p1, &RunMode::Exact, Some(&mut trace)).unwrap();
        assert_abs_diff_eq!(e.energy, -3.0, epsilon = 1e-12);
        assert_eq!(trace.len(), 1);
        assert_eq!(trace.records()[0].theta, vec![1.234, 0.0]);
    }

    #[test]
    fn sampled_evaluation_carries_counts() {
        let g = canonical();
        let p = QaoaParams::new(vec![0.3], vec![0.6]).unwrap();
        let e = evaluate_qaoa(&g, &p, &RunMode::Sampled { shots: 256, seed: 1 }, None).unwrap();
        assert_eq!(e.shots, Some(256));
        assert_eq!(e.counts.unwrap().shots(), 256);
        assert!(e.energy <= 0.0 && e.energy >= -6.0);
    }

    #[test]
    fn objective_reseeds_per_call_reproducibly() {
        let mode = RunMode::Sampled { shots: 64, seed: 9 };
        let mut a = QaoaObjective::new(canonical(), 1, mode.clone()).unwrap();
        let mut b = QaoaObjective::new(canonical(), 1, mode).unwrap();
        let theta = [0.4, 0.9];
        let ea: Vec<f64> = (0..5).map(|_| a.energy(&theta).unwrap()).collect();
        let eb: Vec<f64> = (0..5).map(|_| b.energy(&theta).unwrap()).collect();
        assert_eq!(ea, eb);
        assert!(ea.windows(2).any(|w| w[0] != w[1]));
        assert!(a.energy(&[0.1]).is_err());
    }

    #[test]
    fn trace_best_ignores_nan() {
        let mut t = OptimizationTrace::new("x");
        t.push(&[0.0], f64::NAN);
        t.push(&[1.0], -2.0);
        t.push(&[2.0], -1.0);
        assert_eq!(t.best().unwrap().eval, 1);
    }
}
