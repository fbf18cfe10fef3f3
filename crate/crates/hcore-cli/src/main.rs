//! Command-line interface to the core decompositions.
//!
//! Reads whitespace-separated edge lists, writes `node,core` CSV in
//! deletion order (original node labels), and exposes the comparison
//! harness plus a parameter inspector.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hcore::{
    confidence_constant, core_fast, core_naive, exact_core_decomposition, load_edge_list,
    run_trials, Algorithm, CoreMap64, Graph, RunConfig64, TrialPlan, CSV_HEADER,
};

#[derive(Parser)]
#[command(name = "hcore", version, about = "Distance-generalized core decomposition")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact decomposition by iterated minimum-reach peeling.
    Exact(ExactArgs),
    /// Approximate decomposition from bounded rank samples.
    Approx(ApproxArgs),
    /// Run exact and approximate variants side by side, reporting CSV.
    Compare(CompareArgs),
    /// Print graph size and the sampling parameters a config implies.
    Stats(StatsArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Edge list file; `#`/`%` comment lines and blank lines are skipped.
    #[arg(long)]
    input: PathBuf,
    /// Path length bound defining reachability.
    #[arg(long = "h", default_value_t = 1)]
    h: usize,
}

impl InputArgs {
    fn read(&self) -> Result<Graph, String> {
        if self.h == 0 {
            return Err("--h must be at least 1".to_string());
        }
        read_graph(&self.input)
    }
}

#[derive(Args)]
struct ExactArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Output file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ApproxArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Relative accuracy target in (0, 1/2].
    #[arg(long)]
    epsilon: f64,
    /// Failure probability bound in (0, 1).
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    /// Rank sampling seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Variant::Fast)]
    algorithm: Variant,
    /// Accept epsilon above 1/2; the accuracy guarantee no longer holds.
    #[arg(long)]
    allow_large_epsilon: bool,
    /// Build full samples for every node up front.
    #[arg(long)]
    no_delayed_init: bool,
    /// Keep peeling after the running value covers every remaining node.
    #[arg(long)]
    no_early_stop: bool,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    /// Comma-separated rank sampling seeds.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    seeds: Vec<u64>,
    /// Approximate variants to run (repeatable).
    #[arg(long, value_enum, default_values_t = [Variant::Naive, Variant::Fast])]
    algorithm: Vec<Variant>,
    /// Timed executions per row; the median is reported.
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    #[arg(long)]
    no_delayed_init: bool,
    #[arg(long)]
    no_early_stop: bool,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variant {
    Naive,
    Fast,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Exact(args) => {
            let g = args.input.read()?;
            let map = if g.node_count() == 0 {
                CoreMap64::default()
            } else {
                exact_core_decomposition::<f64>(&g, args.input.h)
            };
            write_core_map(&g, &map, args.output.as_deref())
        }
        Command::Approx(args) => {
            let g = args.input.read()?;
            if g.node_count() == 0 {
                return write_core_map(&g, &CoreMap64::default(), args.output.as_deref());
            }
            let config = if args.allow_large_epsilon {
                eprintln!(
                    "warning: epsilon = {} exceeds 1/2, the accuracy guarantee does not apply",
                    args.epsilon
                );
                RunConfig64::with_unchecked_epsilon(
                    g.node_count(),
                    args.input.h,
                    args.epsilon,
                    args.delta,
                    args.seed,
                )
            } else {
                RunConfig64::new(g.node_count(), args.input.h, args.epsilon, args.delta, args.seed)
            }
            .map_err(|e| e.to_string())?
            .heuristics(!args.no_delayed_init, !args.no_early_stop);
            let map = match args.algorithm {
                Variant::Naive => core_naive(&g, &config),
                Variant::Fast => core_fast(&g, &config),
            };
            write_core_map(&g, &map, args.output.as_deref())
        }
        Command::Compare(args) => {
            let g = args.input.read()?;
            let mut algorithms = vec![Algorithm::Exact];
            for v in &args.algorithm {
                let a = match v {
                    Variant::Naive => Algorithm::Naive,
                    Variant::Fast => Algorithm::Fast,
                };
                if !algorithms.contains(&a) {
                    algorithms.push(a);
                }
            }
            let dataset = args
                .input
                .input
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "graph".to_string());
            let plan = TrialPlan {
                dataset: &dataset,
                h: args.input.h,
                epsilon: args.epsilon,
                delta: args.delta,
                seeds: &args.seeds,
                algorithms: &algorithms,
                repeats: args.repeats,
                delayed_init: !args.no_delayed_init,
                early_stop: !args.no_early_stop,
            };
            let reports = run_trials(&g, &plan).map_err(|e| e.to_string())?;
            let mut out = open_output(args.output.as_deref())?;
            write_all(&mut out, |out| {
                writeln!(out, "{CSV_HEADER}")?;
                for row in &reports {
                    writeln!(out, "{}", row.csv_row())?;
                }
                Ok(())
            })
        }
        Command::Stats(args) => {
            let g = args.input.read()?;
            let config =
                RunConfig64::new(g.node_count(), args.input.h, args.epsilon, args.delta, 0)
                    .map_err(|e| e.to_string())?;
            let confidence = confidence_constant::<f64>(g.node_count(), args.delta)
                .map_err(|e| e.to_string())?;
            println!("n = {}", g.node_count());
            println!("m = {}", g.edge_count());
            println!("C = {confidence}");
            println!("M = {}", config.budget());
            Ok(())
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph, String> {
    let file = File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
    load_edge_list(BufReader::new(file)).map_err(|e| format!("{}: {e}", path.display()))
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, String> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| format!("{}: {e}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn write_all(
    out: &mut Box<dyn Write>,
    emit: impl FnOnce(&mut Box<dyn Write>) -> io::Result<()>,
) -> Result<(), String> {
    emit(out).and_then(|()| out.flush()).map_err(|e| e.to_string())
}

/// Writes `node,core` rows in deletion order, using the labels the input
/// file carried. Values print with full precision; approximate cores can
/// be non-integral.
fn write_core_map(g: &Graph, map: &CoreMap64, path: Option<&Path>) -> Result<(), String> {
    let mut out = open_output(path)?;
    write_all(&mut out, |out| {
        writeln!(out, "node,core")?;
        for &v in &map.deletion_order {
            writeln!(out, "{},{}", g.original_id(v), map.values[v as usize])?;
        }
        Ok(())
    })
}
