//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error (bad flags, unreadable or invalid
//! inputs), 2 runtime failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use qaoa_core::{brute_force_maxcut, MaxCutInstance};

use crate::config::{ExperimentConfig, GraphFile, GraphSource, SweepConfig};
use crate::error::{write, HarnessError};
use crate::experiment::{run_experiment, sig9, CountsFile, TraceTable};
use crate::plot::{plot_histogram, plot_trace, Series};
use crate::sweep::run_sweep;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

const DEFAULT_OUT: &str = "out";

#[derive(Debug, Parser)]
#[command(name = "qaoa", version, about = "QAOA MaxCut workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimize and sample one experiment
    Solve(RunArgs),
    /// Run the cross product of a sweep config
    Sweep(RunArgs),
    /// Print the maximum cut and every optimal assignment
    BruteForce {
        /// `canonical` or an edge-list file
        #[arg(long, default_value = "canonical")]
        graph: String,
    },
    /// Render counts.json as a histogram or trace.csv as a progression plot
    Plot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// `energy` or `params` (trace plots only)
        #[arg(long, default_value = "energy")]
        series: String,
        /// Graph whose optima are highlighted (histograms only)
        #[arg(long, default_value = "canonical")]
        graph: String,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Override the master seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override the output directory
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

fn usage(e: HarnessError) -> Failure {
    Failure::Usage(e.to_string())
}

/// Parse `argv` (including the program name) and run. Human-readable output
/// goes to `stdout`, diagnostics to `stderr`.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(stderr, "{text}") } else { write!(stdout, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_RUNTIME
        }
    }
}

fn load_graph(spec: &str) -> Result<MaxCutInstance, HarnessError> {
    if spec == "canonical" {
        GraphSource::default().load()
    } else {
        GraphSource::File(GraphFile { file: spec.into() }).load()
    }
}

fn out_dir(flag: Option<PathBuf>, config: &Option<PathBuf>) -> PathBuf {
    flag.or_else(|| config.clone()).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Solve(args) => {
            let mut config = ExperimentConfig::load(&args.config).map_err(usage)?;
            if let Some(seed) = args.seed {
                config.seed = seed;
            }
            config.resolve().map_err(usage)?;
            let dir = out_dir(args.out, &config.out_dir);
            let art = run_experiment(&config, &dir)?;
            let s = &art.summary;
            let _ = writeln!(
                stdout,
                "{} p={} {}: best energy {} over {} evaluations",
                s.method,
                s.p,
                s.status,
                sig9(s.best_energy),
                s.evals_used
            );
            let _ = writeln!(
                stdout,
                "final energy {} | approx ratio {} | optima mass {} | best {}",
                sig9(s.final_energy),
                sig9(s.approx_ratio),
                sig9(s.ground_pair_prob),
                s.best_bitstrings.join(" ")
            );
            let _ = writeln!(stdout, "artifacts in {}", dir.display());
        }
        Command::Sweep(args) => {
            let mut sweep = SweepConfig::load(&args.config).map_err(usage)?;
            if let Some(seed) = args.seed {
                sweep.base.seed = seed;
            }
            crate::sweep::expand(&sweep).map_err(usage)?;
            let dir = out_dir(args.out, &sweep.base.out_dir);
            let rows = run_sweep(&sweep, &dir)?;
            for r in &rows {
                let _ = writeln!(
                    stdout,
                    "cell {:>4}  p={} {:<6} {:<13} {:<20} f_best {:>12}  ratio {:>6}  optima mass {}",
                    r.cell,
                    r.p,
                    r.method,
                    r.noise,
                    r.mitigation,
                    sig9(r.f_best),
                    sig9(r.approx_ratio),
                    sig9(r.ground_pair_prob)
                );
            }
            let _ = writeln!(stdout, "{} cells; table in {}", rows.len(), dir.join(crate::sweep::SWEEP_CSV).display());
        }
        Command::BruteForce { graph } => {
            let g = load_graph(&graph).map_err(usage)?;
            let bf = brute_force_maxcut(&g).map_err(|e| Failure::Runtime(e.to_string()))?;
            let optima: Vec<&str> = bf.optima.iter().map(String::as_str).collect();
            let _ = writeln!(stdout, "{} {}", sig9(bf.value), optima.join(" "));
        }
        Command::Plot {
            input,
            out,
            series,
            graph,
        } => {
            let series: Series = series.parse().map_err(Failure::Usage)?;
            let svg = render(&input, series, &graph)?;
            write(&out, svg)?;
            let _ = writeln!(stdout, "wrote {}", out.display());
        }
    }
    Ok(())
}

fn render(input: &Path, series: Series, graph: &str) -> Result<String, Failure> {
    let is_counts = input.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if !is_counts {
        let table = TraceTable::load(input).map_err(usage)?;
        return Ok(plot_trace(&table, series));
    }
    let counts = CountsFile::load(input).map_err(usage)?;
    let g = load_graph(graph).map_err(usage)?;
    if let Some(bits) = counts.counts.keys().next() {
        if bits.len() != g.n() {
            return Err(Failure::Usage(format!(
                "{}: {}-bit counts do not match a {}-node graph",
                input.display(),
                bits.len(),
                g.n()
            )));
        }
    }
    let optima = brute_force_maxcut(&g).map_err(|e| Failure::Runtime(e.to_string()))?.optima;
    Ok(plot_histogram(&counts, &optima))
}
