//! One experiment: optimize θ, run the final circuit, write artifacts.
//!
//! Files written to the output directory:
//! - `counts.json`: `{"shots", "counts", "config_hash", "seed"}`
//! - `trace.csv`: one row per objective evaluation
//! - `summary.json`: headline numbers, see [`Summary`]
//! - `config.json`: the config that produced them

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::Instant;

use qaoa_core::optim::{random_qaoa_start, FdStep};
use qaoa_core::{
    brute_force_maxcut, build_qaoa_circuit, energy_from_counts, minimize, run_circuit, Counts, MinimizeProblem,
    NoiseConfig, OptimizationTrace, Options, QaoaObjective, QaoaParams, RunMode, Status,
};
use serde::{Deserialize, Serialize};

use crate::config::{Experiment, ExperimentConfig, Init, ModeSpec};
use crate::error::{write, HarnessError, Result};

pub const COUNTS_FILE: &str = "counts.json";
pub const TRACE_FILE: &str = "trace.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const CONFIG_FILE: &str = "config.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountsFile {
    pub shots: u64,
    pub counts: BTreeMap<String, u64>,
    pub config_hash: String,
    pub seed: u64,
}

impl CountsFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = crate::error::read_to_string(path)?;
        let parsed: Self = serde_json::from_str(&text).map_err(|e| HarnessError::Parse {
            path: path.to_path_buf(),
            msg: e.to_string(),
        })?;
        let total: u64 = parsed.counts.values().sum();
        if total != parsed.shots {
            return Err(HarnessError::Parse {
                path: path.to_path_buf(),
                msg: format!("counts sum to {total} but shots = {}", parsed.shots),
            });
        }
        Ok(parsed)
    }

    pub fn to_counts(&self) -> std::result::Result<Counts, qaoa_core::Error> {
        let n = self.counts.keys().next().map_or(0, String::len);
        Counts::from_map(n, self.counts.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub method: String,
    pub p: usize,
    pub status: String,
    /// Lowest energy in the trace.
    pub best_energy: f64,
    pub best_theta: Vec<f64>,
    /// Energy of the final counts.
    pub final_energy: f64,
    /// Sampled bitstrings with the highest cut.
    pub best_bitstrings: Vec<String>,
    /// The most frequent sampled bitstrings, as many as there are optima.
    pub dominant_bitstrings: Vec<String>,
    /// Best sampled cut over the brute-force optimum.
    pub approx_ratio: f64,
    /// Final-run probability mass on the brute-force optima.
    pub ground_pair_prob: f64,
    pub max_cut: f64,
    pub optima: Vec<String>,
    pub evals_used: usize,
    pub shots: u64,
    pub seed: u64,
    pub config_hash: String,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub dir: PathBuf,
    pub counts_path: PathBuf,
    pub trace_path: PathBuf,
    pub summary_path: PathBuf,
    pub summary: Summary,
    pub counts: Counts,
    pub trace: OptimizationTrace,
}

/// Outcome of the optimization stage.
pub struct Optimized {
    pub trace: OptimizationTrace,
    pub status: Status,
    pub best_theta: Vec<f64>,
    pub best_energy: f64,
}

fn objective_mode(exp: &Experiment) -> RunMode<f64> {
    match exp.mode {
        ModeSpec::Exact => RunMode::Exact,
        ModeSpec::Sampled => RunMode::Sampled {
            shots: exp.shots,
            seed: exp.seed,
        },
        ModeSpec::Noisy => RunMode::Noisy {
            config: exp.noise,
            shots: exp.shots,
            seed: exp.seed,
        },
    }
}

/// Optimize θ. Restarts share one objective, so stochastic evaluations
/// never reuse a seed, and their traces are concatenated in order.
pub fn optimize(exp: &Experiment) -> Result<Optimized> {
    let mut objective = QaoaObjective::new(exp.instance.clone(), exp.p, objective_mode(exp))?;
    let method = exp.method.as_str();
    if exp.p == 0 {
        let energy = objective.energy(&[])?;
        let mut trace = OptimizationTrace::new(method);
        trace.push(&[], energy);
        trace.status = Some(Status::Converged);
        return Ok(Optimized {
            trace,
            status: Status::Converged,
            best_theta: Vec::new(),
            best_energy: energy,
        });
    }
    let starts: Vec<Vec<f64>> = match &exp.init {
        Init::Explicit(theta) => vec![theta.clone()],
        Init::Random { restarts } => (0..*restarts as u64)
            .map(|k| random_qaoa_start(exp.p, exp.seed, k))
            .collect(),
    };
    let mut options = Options {
        max_evals: exp.max_evals,
        ..Options::default()
    };
    if objective.is_stochastic() {
        options.fd_step = FdStep::shot_noise_default();
    }

    let mut trace = OptimizationTrace::new(method);
    let mut best: Option<(f64, Status)> = None;
    for x0 in starts {
        let problem = MinimizeProblem::new(objective.as_fn(), x0).with_options(options.clone());
        let r = minimize(exp.method, problem)?;
        for rec in r.trace.records() {
            trace.push(&rec.theta, rec.energy);
        }
        if best.is_none_or(|(f, _)| r.f_best < f) {
            best = Some((r.f_best, r.status));
        }
    }
    let status = best.map(|(_, s)| s).expect("at least one start");
    trace.status = Some(status);
    let rec = trace.best().expect("non-empty trace").clone();
    Ok(Optimized {
        trace,
        status,
        best_theta: rec.theta,
        best_energy: rec.energy,
    })
}

/// Execution mode of the final run: noisy whenever any noise or mitigation
/// is configured, noiseless sampling otherwise.
pub fn final_mode(exp: &Experiment) -> RunMode<f64> {
    if exp.noise == NoiseConfig::default() {
        RunMode::Sampled {
            shots: exp.shots,
            seed: exp.seed,
        }
    } else {
        RunMode::Noisy {
            config: exp.noise,
            shots: exp.shots,
            seed: exp.seed,
        }
    }
}

pub fn run_experiment(config: &ExperimentConfig, out_dir: &Path) -> Result<RunArtifacts> {
    let started = Instant::now();
    let exp = config.resolve()?;
    let opt = optimize(&exp)?;

    let params = QaoaParams::from_flat(&opt.best_theta)?;
    let circuit = build_qaoa_circuit(&exp.instance, &params);
    let counts = run_circuit(&circuit, &final_mode(&exp))?
        .into_counts()
        .expect("sampled modes return counts");

    let oracle = brute_force_maxcut(&exp.instance)?;
    let optima: Vec<String> = oracle.optima.iter().cloned().collect();
    let mut best_cut = f64::NEG_INFINITY;
    let mut best_bitstrings = Vec::new();
    for (bits, _) in counts.iter() {
        let cut = exp.instance.cut_value(bits)?;
        if cut > best_cut {
            best_cut = cut;
            best_bitstrings.clear();
        }
        if cut == best_cut {
            best_bitstrings.push(bits.to_string());
        }
    }
    let approx_ratio = if oracle.value > 0.0 {
        (best_cut / oracle.value).clamp(0.0, 1.0)
    } else {
        1.0
    };
    let mut by_count: Vec<(&str, u64)> = counts.iter().collect();
    by_count.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    let dominant_bitstrings = by_count
        .iter()
        .take(optima.len())
        .map(|(b, _)| b.to_string())
        .collect();
    let optima_set: BTreeSet<String> = oracle.optima;

    let summary = Summary {
        method: exp.method.to_string(),
        p: exp.p,
        status: opt.status.to_string(),
        best_energy: opt.best_energy,
        best_theta: opt.best_theta.clone(),
        final_energy: energy_from_counts(&counts, &exp.instance)?,
        best_bitstrings,
        dominant_bitstrings,
        approx_ratio,
        ground_pair_prob: counts.mass(&optima_set),
        max_cut: oracle.value,
        optima,
        evals_used: opt.trace.len(),
        shots: exp.shots,
        seed: exp.seed,
        config_hash: exp.config_hash.clone(),
        wall_time_s: started.elapsed().as_secs_f64(),
    };

    std::fs::create_dir_all(out_dir).map_err(|e| HarnessError::io(out_dir, e))?;
    let counts_path = out_dir.join(COUNTS_FILE);
    let trace_path = out_dir.join(TRACE_FILE);
    let summary_path = out_dir.join(SUMMARY_FILE);
    let counts_file = CountsFile {
        shots: counts.shots(),
        counts: counts.map().clone(),
        config_hash: exp.config_hash.clone(),
        seed: exp.seed,
    };
    write(&counts_path, to_json(&counts_file))?;
    write(&trace_path, trace_csv(&opt.trace, exp.p))?;
    write(&summary_path, to_json(&summary))?;
    let mut recorded = config.clone();
    recorded.out_dir = None;
    write(&out_dir.join(CONFIG_FILE), to_json(&recorded))?;

    Ok(RunArtifacts {
        dir: out_dir.to_path_buf(),
        counts_path,
        trace_path,
        summary_path,
        summary,
        counts,
        trace: opt.trace,
    })
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn trace_header(p: usize) -> String {
    let mut cols = vec!["eval".to_string(), "energy".to_string()];
    cols.extend((1..=p).map(|i| format!("beta_{i}")));
    cols.extend((1..=p).map(|i| format!("gamma_{i}")));
    cols.join(",")
}

pub fn trace_csv(trace: &OptimizationTrace, p: usize) -> String {
    let mut out = trace_header(p);
    out.push('\n');
    for rec in trace.records() {
        out.push_str(&rec.eval.to_string());
        for v in std::iter::once(rec.energy).chain(rec.theta.iter().copied()) {
            out.push(',');
            out.push_str(&sig9(v));
        }
        out.push('\n');
    }
    out
}

/// Format with 9 significant digits, `%g` style.
pub fn sig9(v: f64) -> String {
    const DIGITS: i32 = 9;
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Parsed trace CSV: parameter count and `(eval, energy, θ)` rows.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceTable {
    pub p: usize,
    pub rows: Vec<(usize, f64, Vec<f64>)>,
}

impl TraceTable {
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut lines = text.lines();
        let header = lines.next().ok_or("empty trace file")?;
        let cols: Vec<&str> = header.split(',').collect();
        if cols.len() < 2 || cols[0] != "eval" || cols[1] != "energy" || cols.len() % 2 != 0 {
            return Err(format!("unexpected trace header {header:?}"));
        }
        let p = (cols.len() - 2) / 2;
        if header != trace_header(p) {
            return Err(format!("unexpected trace header {header:?}"));
        }
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != cols.len() {
                return Err(format!("line {}: expected {} fields, got {}", i + 2, cols.len(), fields.len()));
            }
            let eval = fields[0]
                .parse()
                .map_err(|_| format!("line {}: bad eval index {:?}", i + 2, fields[0]))?;
            let nums = fields[1..]
                .iter()
                .map(|f| f.parse::<f64>().map_err(|_| format!("line {}: bad number {f:?}", i + 2)))
                .collect::<std::result::Result<Vec<f64>, String>>()?;
            rows.push((eval, nums[0], nums[1..].to_vec()));
        }
        Ok(Self { p, rows })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = crate::error::read_to_string(path)?;
        Self::parse(&text).map_err(|msg| HarnessError::Parse {
            path: path.to_path_buf(),
            msg,
        })
    }
}
