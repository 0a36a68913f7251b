//! Cross-product sweeps over depth, method, noise and mitigation.

use std::path::{Path, PathBuf};

use qaoa_core::rng::{derive_seed, Domain};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, SweepConfig};
use crate::error::{write, HarnessError, Result};
use crate::experiment::{run_experiment, sig9, CONFIG_FILE};

pub const MAX_CELLS: usize = 1000;
pub const SWEEP_CSV: &str = "sweep.csv";

/// One row of the combined sweep table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub cell: usize,
    pub p: usize,
    pub method: String,
    pub noise: String,
    pub mitigation: String,
    pub seed: u64,
    pub f_best: f64,
    pub approx_ratio: f64,
    pub ground_pair_prob: f64,
    pub evals_used: usize,
    pub dir: PathBuf,
}

/// Expand the axes into per-cell configs, in row-major order
/// (p, method, noise, mitigation). Each cell's seed is derived from the
/// master seed and the cell index.
pub fn expand(sweep: &SweepConfig) -> Result<Vec<ExperimentConfig>> {
    let base = &sweep.base;
    let axes = &sweep.axes;
    let or_base = |len: usize| len.max(1);
    let total = or_base(axes.p.len())
        * or_base(axes.method.len())
        * or_base(axes.noise.len())
        * or_base(axes.mitigation.len());
    if total > MAX_CELLS {
        return Err(HarnessError::config(
            "axes",
            format!("{total} cells exceed the limit of {MAX_CELLS}"),
        ));
    }
    let mut cells = Vec::with_capacity(total);
    for ip in 0..or_base(axes.p.len()) {
        for im in 0..or_base(axes.method.len()) {
            for inz in 0..or_base(axes.noise.len()) {
                for imt in 0..or_base(axes.mitigation.len()) {
                    let mut c = base.clone();
                    if let Some(p) = axes.p.get(ip) {
                        c.p = *p;
                    }
                    if let Some(m) = axes.method.get(im) {
                        c.method = m.clone();
                    }
                    if let Some(n) = axes.noise.get(inz) {
                        c.noise = n.clone();
                    }
                    if let Some(m) = axes.mitigation.get(imt) {
                        c.mitigation = m.clone();
                    }
                    c.seed = derive_seed(base.seed, Domain::Cell, cells.len() as u64);
                    c.out_dir = None;
                    cells.push(c);
                }
            }
        }
    }
    Ok(cells)
}

pub fn cell_dir(root: &Path, cell: usize) -> PathBuf {
    root.join(format!("cell_{cell:04}"))
}

/// Run every cell (in parallel) and write `sweep.csv` under `out_dir`.
/// All cells are validated before any runs.
pub fn run_sweep(sweep: &SweepConfig, out_dir: &Path) -> Result<Vec<SweepRow>> {
    let cells = expand(sweep)?;
    for (i, c) in cells.iter().enumerate() {
        c.resolve().map_err(|e| match e {
            HarnessError::Config { field, msg } => HarnessError::config(field, format!("{msg} (cell {i})")),
            other => other,
        })?;
    }
    let rows = cells
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let dir = cell_dir(out_dir, i);
            let art = run_experiment(c, &dir)?;
            Ok(SweepRow {
                cell: i,
                p: c.p,
                method: art.summary.method.clone(),
                noise: c.noise.label(),
                mitigation: c.mitigation.label(),
                seed: c.seed,
                f_best: art.summary.best_energy,
                approx_ratio: art.summary.approx_ratio,
                ground_pair_prob: art.summary.ground_pair_prob,
                evals_used: art.summary.evals_used,
                dir,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    write(&out_dir.join(SWEEP_CSV), sweep_csv(&rows))?;
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("cell,p,method,noise,mitigation,seed,f_best,approx_ratio,ground_pair_prob,evals_used\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.cell,
            r.p,
            r.method,
            r.noise,
            r.mitigation,
            r.seed,
            sig9(r.f_best),
            sig9(r.approx_ratio),
            sig9(r.ground_pair_prob),
            r.evals_used
        ));
    }
    out
}

/// Config recorded in a cell directory, for re-running a single cell.
pub fn cell_config(dir: &Path) -> Result<ExperimentConfig> {
    ExperimentConfig::load(&dir.join(CONFIG_FILE))
}
