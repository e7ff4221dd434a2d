//! `metacycles`: batch front end for cycle decompositions of finite energy
//! landscapes.
//!
//! Exit codes: 0 success, 1 usage error, 2 invalid input, 3 violation found
//! by `verify` or `fuzz`, 4 every replica of some simulation was censored.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use metacycles_core::energy::EnergyScale;
use metacycles_core::equivalence::verify_equivalence;
use metacycles_core::export::{
    cycle_tree_dot, cycle_tree_json, exit_rows, report_json, report_value, stats_json, stats_tsv,
    trace_json, visit_rows, FORMAT_VERSION,
};
use metacycles_core::format::{load_landscape, to_json, Format};
use metacycles_core::generator::{random_landscape, GeneratorParams};
use metacycles_core::graph_cycles::run_decomposition;
use metacycles_core::path_cycles::enumerate_path_cycles;
use metacycles_core::simulation::{check_exit_window, check_visit_before_exit, mix_seed};
use metacycles_core::{Error, Landscape};

const USAGE: u8 = 1;
const INVALID_INPUT: u8 = 2;
const VIOLATION: u8 = 3;
const INFEASIBLE: u8 = 4;

#[derive(Parser)]
#[command(name = "metacycles", version, about = "Cycle decompositions of finite energy landscapes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write the result to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check a landscape document and print a summary.
    Validate {
        input: PathBuf,
        /// Print the canonical form of the document instead of the summary.
        #[arg(long)]
        canonical: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Export the path-cycle tree.
    PathCycles {
        input: PathBuf,
        /// Graph-description (DOT) text instead of JSON.
        #[arg(long)]
        dot: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Export the graph-cycle decomposition trace.
    GraphCycles {
        input: PathBuf,
        /// Include every finite V^k and V_*^k entry.
        #[arg(long)]
        iterations: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Compare both decompositions; exits 3 on any violation.
    Verify {
        input: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Run the equivalence check on random landscapes; exits 3 on any violation.
    Fuzz {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        min_states: usize,
        #[arg(long, default_value_t = 10)]
        max_states: usize,
        /// Probability of each extra (non-tree) edge.
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        energy_min: i64,
        #[arg(long, default_value_t = 6, allow_negative_numbers = true)]
        energy_max: i64,
        /// Ticks per energy unit.
        #[arg(long, default_value_t = 1_000_000)]
        energy_scale: i64,
        #[arg(long)]
        seed: u64,
        /// Directory receiving each failing landscape as `<index>.json`.
        #[arg(long, value_name = "DIR")]
        counterexamples: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Monte Carlo exit-window and visit-before-exit checks on one cycle.
    Simulate {
        input: PathBuf,
        /// Comma-separated state ids of the cycle.
        #[arg(long, value_delimiter = ',', required = true)]
        cycle: Vec<String>,
        /// Comma-separated inverse temperatures.
        #[arg(long, value_delimiter = ',', required = true)]
        betas: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(long, default_value_t = 1000)]
        replicas: usize,
        #[arg(long)]
        seed: u64,
        /// Start of the visit-before-exit check (requires --to).
        #[arg(long, requires = "to")]
        from: Option<String>,
        /// State to visit before leaving the cycle (requires --from).
        #[arg(long, requires = "from")]
        to: Option<String>,
        /// Tab-separated rows instead of JSON.
        #[arg(long)]
        tsv: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Graph-description (DOT) text for the cycle hierarchy.
    ExportTree {
        input: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_input_error() { INVALID_INPUT } else { USAGE };
        Failure { code, message: format!("{}: {e}", e.kind()) }
    }
}

type Outcome = std::result::Result<u8, Failure>;

fn load(path: &Path) -> std::result::Result<Landscape, Failure> {
    let file = fs::File::open(path).map_err(|e| Failure {
        code: INVALID_INPUT,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    Ok(load_landscape(file, Format::Json)?)
}

fn emit(output: &Output, text: &str) -> std::result::Result<(), Failure> {
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Validate { input, canonical, output } => {
            let l = load(&input)?;
            let text = if canonical {
                to_json(&l)
            } else {
                let edges: usize = (0..l.len()).map(|x| l.neighbors(x).len()).sum::<usize>() / 2;
                format!("ok: {} states, {} edges, max degree {}\n", l.len(), edges, l.max_degree())
            };
            emit(&output, &text)?;
            Ok(0)
        }
        Command::PathCycles { input, dot, output } => {
            let l = load(&input)?;
            let tree = enumerate_path_cycles(&l);
            let text = if dot { cycle_tree_dot(&l, &tree) } else { cycle_tree_json(&l, &tree) };
            emit(&output, &text)?;
            Ok(0)
        }
        Command::GraphCycles { input, iterations, output } => {
            let l = load(&input)?;
            let trace = run_decomposition(&l, None)?;
            emit(&output, &trace_json(&l, &trace, iterations))?;
            Ok(0)
        }
        Command::Verify { input, output } => {
            let l = load(&input)?;
            let report = verify_equivalence(&l)?;
            emit(&output, &report_json(&l, &report))?;
            Ok(if report.is_clean() { 0 } else { VIOLATION })
        }
        Command::Fuzz {
            count,
            min_states,
            max_states,
            density,
            energy_min,
            energy_max,
            energy_scale,
            seed,
            counterexamples,
            output,
        } => {
            let params = GeneratorParams {
                min_states,
                max_states,
                edge_density: density,
                energy_min,
                energy_max,
                energy_scale: EnergyScale::new(energy_scale)
                    .ok_or_else(|| Failure::usage("--energy-scale must be positive"))?,
            };
            params.validate()?;
            let results: Vec<_> = (0..count)
                .into_par_iter()
                .map(|i| {
                    let instance_seed = mix_seed(seed, i as u64);
                    let l = random_landscape(&params, instance_seed)?;
                    let report = verify_equivalence(&l)?;
                    Ok((i, instance_seed, l, report))
                })
                .collect::<std::result::Result<_, Error>>()?;

            let mut failures = Vec::new();
            for (i, instance_seed, l, report) in &results {
                if report.is_clean() {
                    continue;
                }
                if let Some(dir) = &counterexamples {
                    fs::create_dir_all(dir)
                        .and_then(|_| fs::write(dir.join(format!("{i}.json")), to_json(l)))
                        .map_err(|e| Failure::usage(format!("cannot write counterexample: {e}")))?;
                }
                failures.push(json!({
                    "index": i,
                    "seed": instance_seed,
                    "report": report_value(l, report),
                    "landscape": serde_json::from_str::<serde_json::Value>(&to_json(l)).expect("canonical json"),
                }));
            }
            let cycles: usize = results.iter().map(|r| r.3.graph_cycle_count).sum();
            let summary = json!({
                "format_version": FORMAT_VERSION,
                "seed": seed,
                "instances": count,
                "clean": count - failures.len(),
                "total_cycles": cycles,
                "failures": failures,
            });
            emit(&output, &pretty(&summary))?;
            Ok(if failures.is_empty() { 0 } else { VIOLATION })
        }
        Command::Simulate {
            input,
            cycle,
            betas,
            epsilon,
            replicas,
            seed,
            from,
            to,
            tsv,
            output,
        } => {
            let l = load(&input)?;
            let cycle = l.state_set(&cycle)?;
            let exit = check_exit_window(&l, &cycle, &betas, epsilon, replicas, seed)?;
            let mut rows = exit_rows(&l, &exit);
            let mut infeasible = exit.iter().any(|r| r.stats.all_censored());
            if let (Some(from), Some(to)) = (from, to) {
                let (x, y) = (l.state(&from)?, l.state(&to)?);
                let visit = check_visit_before_exit(&l, &cycle, x, y, &betas, epsilon, replicas, seed)?;
                infeasible |= visit.iter().any(|r| r.stats.all_censored());
                rows.extend(visit_rows(&l, &visit));
            }
            let text = if tsv { stats_tsv(&rows) } else { stats_json(&l, &cycle, epsilon, seed, &rows) };
            emit(&output, &text)?;
            Ok(if infeasible { INFEASIBLE } else { 0 })
        }
        Command::ExportTree { input, output } => {
            let l = load(&input)?;
            emit(&output, &cycle_tree_dot(&l, &enumerate_path_cycles(&l)))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
