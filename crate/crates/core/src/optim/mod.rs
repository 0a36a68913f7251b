//! Derivative-free minimizers behind one dispatch interface.
//!
//! All methods share the same bookkeeping: every objective call goes through
//! an [`Evaluator`] that enforces the budget and records the trace, so
//! `evals_used == trace.len()` and `f_best` is the trace minimum.

mod cg;
mod cobyla;
mod linalg;
mod powell;

use std::fmt;
use std::str::FromStr;

use rand::Rng;

pub use crate::objective::{OptimizationTrace, Status};
use crate::error::{Error, Result};
use crate::rng::{substream, Domain};
use crate::scalar::Real;

pub use cg::minimize_cg_fd;
pub use cobyla::minimize_cobyla_like;
pub use powell::minimize_powell;

/// Finite-difference step for gradient estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FdStep<T> {
    /// `h_i = scale · max(1, |x_i|)`; suited to deterministic objectives.
    Relative(T),
    /// Fixed `h`; use a large one when the objective carries shot noise.
    Absolute(T),
}

impl<T: Real> FdStep<T> {
    pub fn exact_default() -> Self {
        FdStep::Relative(T::lit(1e-6))
    }

    pub fn shot_noise_default() -> Self {
        FdStep::Absolute(T::lit(0.05))
    }

    pub fn step(&self, x: T) -> T {
        match *self {
            FdStep::Relative(s) => s * x.abs().max(T::one()),
            FdStep::Absolute(h) => h,
        }
    }
}

/// Tuning knobs. `None` budgets default to `500 · d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Options<T> {
    pub max_evals: Option<usize>,
    /// Line-search / step tolerance.
    pub xtol: T,
    /// Relative objective-decrease tolerance.
    pub ftol: T,
    /// Gradient-norm tolerance (CG).
    pub gtol: T,
    pub fd_step: FdStep<T>,
    /// Initial and final trust-region radius (COBYLA-like).
    pub rho_start: T,
    pub rho_end: T,
    /// Optional starting simplex (COBYLA-like), `d + 1` points.
    pub initial_simplex: Option<Vec<Vec<T>>>,
}

impl<T: Real> Default for Options<T> {
    fn default() -> Self {
        Self {
            max_evals: None,
            xtol: T::lit(1e-6),
            ftol: T::lit(1e-10),
            gtol: T::lit(1e-6),
            fd_step: FdStep::exact_default(),
            rho_start: T::lit(0.5),
            rho_end: T::lit(1e-4),
            initial_simplex: None,
        }
    }
}

/// Objective, starting point and options.
pub struct MinimizeProblem<T, F> {
    pub objective: F,
    pub x0: Vec<T>,
    pub options: Options<T>,
}

impl<T: Real, F: FnMut(&[T]) -> T> MinimizeProblem<T, F> {
    pub fn new(objective: F, x0: Vec<T>) -> Self {
        Self {
            objective,
            x0,
            options: Options::default(),
        }
    }

    pub fn with_options(mut self, options: Options<T>) -> Self {
        self.options = options;
        self
    }

    pub fn with_max_evals(mut self, max_evals: usize) -> Self {
        self.options.max_evals = Some(max_evals);
        self
    }

    pub fn dim(&self) -> usize {
        self.x0.len()
    }

    pub fn budget(&self) -> usize {
        self.options.max_evals.unwrap_or(500 * self.dim())
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim();
        let cfg = |m: String| Err(Error::Config(m));
        if d == 0 {
            return cfg("problem dimension must be at least 1".into());
        }
        if self.x0.iter().any(|x| !x.is_finite()) {
            return cfg("x0 must be finite".into());
        }
        let budget = self.budget();
        if budget < d {
            return cfg(format!("budget {budget} is smaller than dimension {d}"));
        }
        let o = &self.options;
        for (name, v) in [
            ("xtol", o.xtol),
            ("ftol", o.ftol),
            ("gtol", o.gtol),
            ("rho_start", o.rho_start),
            ("rho_end", o.rho_end),
        ] {
            if !(v > T::zero()) {
                return cfg(format!("{name} must be positive"));
            }
        }
        if o.rho_end > o.rho_start {
            return cfg("rho_end exceeds rho_start".into());
        }
        let h = match o.fd_step {
            FdStep::Relative(h) | FdStep::Absolute(h) => h,
        };
        if !(h > T::zero()) {
            return cfg("finite-difference step must be positive".into());
        }
        if let Some(s) = &o.initial_simplex {
            if s.len() != d + 1 || s.iter().any(|p| p.len() != d) {
                return cfg(format!("initial simplex must hold {} points of length {d}", d + 1));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizeResult<T> {
    pub x_best: Vec<T>,
    pub f_best: T,
    pub evals_used: usize,
    pub status: Status,
    pub trace: OptimizationTrace<T>,
}

/// Marker: the evaluation budget ran out mid-algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Exhausted;

pub(crate) type Step<T> = std::result::Result<T, Exhausted>;

/// Budget-enforcing, trace-recording wrapper around the objective.
pub(crate) struct Evaluator<T, F> {
    f: F,
    budget: usize,
    trace: OptimizationTrace<T>,
    best: Option<(Vec<T>, T)>,
}

impl<T: Real, F: FnMut(&[T]) -> T> Evaluator<T, F> {
    fn new(f: F, budget: usize, method: &str) -> Self {
        Self {
            f,
            budget,
            trace: OptimizationTrace::new(method),
            best: None,
        }
    }

    /// Evaluate `x`; NaN results are reported as `+∞` to the algorithm.
    pub fn eval(&mut self, x: &[T]) -> Step<T> {
        if self.trace.len() >= self.budget {
            return Err(Exhausted);
        }
        let fx = (self.f)(x);
        self.trace.push(x, fx);
        let fx = if fx.is_nan() { T::infinity() } else { fx };
        if self.best.as_ref().is_none_or(|(_, fb)| fx < *fb) {
            self.best = Some((x.to_vec(), fx));
        }
        Ok(fx)
    }

    fn finish(self, status: Status) -> MinimizeResult<T> {
        let mut trace = self.trace;
        trace.status = Some(status);
        let (x_best, f_best) = self.best.expect("at least one evaluation");
        MinimizeResult {
            x_best,
            f_best,
            evals_used: trace.len(),
            status,
            trace,
        }
    }
}

/// Shared driver: validate, run the algorithm body, map budget exhaustion.
pub(crate) fn drive<T, F>(
    problem: MinimizeProblem<T, F>,
    method: &str,
    body: impl FnOnce(&mut Evaluator<T, F>, &[T], &Options<T>) -> Step<Status>,
) -> Result<MinimizeResult<T>>
where
    T: Real,
    F: FnMut(&[T]) -> T,
{
    problem.validate()?;
    let budget = problem.budget();
    let MinimizeProblem {
        objective,
        x0,
        options,
    } = problem;
    let mut ev = Evaluator::new(objective, budget, method);
    let status = body(&mut ev, &x0, &options).unwrap_or(Status::BudgetExhausted);
    Ok(ev.finish(status))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Powell,
    Cg,
    Cobyla,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Powell, Method::Cg, Method::Cobyla];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Powell => "powell",
            Method::Cg => "cg",
            Method::Cobyla => "cobyla",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "powell" => Ok(Method::Powell),
            "cg" => Ok(Method::Cg),
            "cobyla" => Ok(Method::Cobyla),
            other => Err(Error::Config(format!("unknown method {other:?}"))),
        }
    }
}

pub fn minimize<T, F>(method: Method, problem: MinimizeProblem<T, F>) -> Result<MinimizeResult<T>>
where
    T: Real,
    F: FnMut(&[T]) -> T,
{
    match method {
        Method::Powell => minimize_powell(problem),
        Method::Cg => minimize_cg_fd(problem),
        Method::Cobyla => minimize_cobyla_like(problem),
    }
}

/// Dispatch by name; unknown names are configuration errors.
pub fn minimize_named<T, F>(method: &str, problem: MinimizeProblem<T, F>) -> Result<MinimizeResult<T>>
where
    T: Real,
    F: FnMut(&[T]) -> T,
{
    minimize(method.parse()?, problem)
}

/// Random QAOA starting point: `β ∈ [0, π)`, `γ ∈ [0, 2π)`, flat layout.
pub fn random_qaoa_start<T: Real>(depth: usize, seed: u64, restart: u64) -> Vec<T> {
    let mut rng = substream(seed, Domain::Restart, restart);
    let pi = std::f64::consts::PI;
    let betas: Vec<T> = (0..depth).map(|_| T::lit(rng.random::<f64>() * pi)).collect();
    let gammas: Vec<T> = (0..depth)
        .map(|_| T::lit(rng.random::<f64>() * 2.0 * pi))
        .collect();
    betas.into_iter().chain(gammas).collect()
}

/// Run `restarts` independent minimizations from random QAOA starts and keep
/// the best. Returns the winner and every individual result.
pub fn multistart<T, F>(
    restarts: usize,
    depth: usize,
    seed: u64,
    mut run: F,
) -> Result<(MinimizeResult<T>, Vec<MinimizeResult<T>>)>
where
    T: Real,
    F: FnMut(Vec<T>) -> Result<MinimizeResult<T>>,
{
    if restarts == 0 {
        return Err(Error::Config("multistart needs at least one restart".into()));
    }
    let all = (0..restarts as u64)
        .map(|k| run(random_qaoa_start(depth, seed, k)))
        .collect::<Result<Vec<_>>>()?;
    let best = all
        .iter()
        .min_by(|a, b| a.f_best.partial_cmp(&b.f_best).unwrap_or(std::cmp::Ordering::Equal))
        .cloned()
        .expect("at least one restart");
    Ok((best, all))
}
