use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use edd_core::exact::DEFAULT_BUDGET;
use edd_core::fixtures;
use edd_core::graph::{validate_solution, EddInstance, EddSolution};
use edd_core::harness::{
    generate_instance, instance_from_points, load_eua, run_algorithm, run_sweep, summarize, Algorithm, SweepConfig,
};

#[derive(Parser)]
#[command(
    name = "edd",
    version,
    about = "Plan cloud-to-edge data distribution under a hop limit"
)]
struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file and print the plan as JSON.
    Solve {
        instance: PathBuf,
        #[arg(long, default_value = "nste")]
        algo: Algorithm,
        /// Seed for the random strategy.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Work limit for the exact solver.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        exact_budget: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a plan against an instance; exits 1 on any violation.
    Validate { instance: PathBuf, solution: PathBuf },
    /// Generate a random instance.
    Gen(GenArgs),
    /// Run a parameter sweep described by a TOML file and write CSV rows.
    Sweep {
        config: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Print mean cost per grid point when done.
        #[arg(long)]
        summary: bool,
    },
    /// Write the built-in example instances (and a known optimal plan) to a directory.
    Fixtures { dir: PathBuf },
}

#[derive(Args)]
struct GenArgs {
    /// Node count. With --eua, the first N sites are used (default: all).
    #[arg(long)]
    n: Option<usize>,
    /// Destination count.
    #[arg(long)]
    r: usize,
    /// Edge density |E|/|V| (ignored with --eua).
    #[arg(long, default_value_t = 1.5)]
    delta: f64,
    #[arg(long, default_value_t = 20.0)]
    gamma: f64,
    #[arg(long, default_value_t = 1)]
    d_limit: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Site list (CSV with latitude/longitude columns); links come from a
    /// k-nearest-neighbour proximity graph.
    #[arg(long)]
    eua: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    knn: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => fs::write(path, format!("{text}\n")).with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut out = io::stdout().lock();
            writeln!(out, "{text}")?;
            Ok(())
        }
    }
}

fn generate(args: &GenArgs) -> Result<EddInstance> {
    match &args.eua {
        Some(path) => {
            let points = load_eua(path)?;
            let n = args.n.unwrap_or(points.len());
            if n == 0 || n > points.len() {
                bail!("--n {n} is outside 1..={} for {}", points.len(), path.display());
            }
            Ok(instance_from_points(
                &points[..n],
                args.knn,
                args.r,
                args.gamma,
                args.d_limit,
                args.seed,
            )?)
        }
        None => {
            let Some(n) = args.n else {
                bail!("--n is required without --eua")
            };
            Ok(generate_instance(
                n,
                args.r,
                args.delta,
                args.gamma,
                args.d_limit,
                args.seed,
            )?)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve {
            instance,
            algo,
            seed,
            exact_budget,
            output,
        } => {
            let inst = EddInstance::load(&instance)?;
            let plan = run_algorithm(&inst, algo, seed, exact_budget)?;
            log::info!(
                "{algo}: cost {} ({} transit, {} links)",
                plan.total_cost(),
                plan.transit.len(),
                plan.e2e_edges.len()
            );
            emit(&plan.to_json(), output.as_deref())?;
        }
        Command::Validate { instance, solution } => {
            let inst = EddInstance::load(&instance)?;
            let plan = EddSolution::load(&solution)?;
            match validate_solution(&inst, &plan) {
                Ok(()) => println!("ok: cost {}", plan.total_cost()),
                Err(violations) => {
                    for v in &violations {
                        eprintln!("violation: {v}");
                    }
                    eprintln!("{} violation(s)", violations.len());
                    return Ok(ExitCode::FAILURE);
                }
            }
        }
        Command::Gen(args) => {
            let inst = generate(&args)?;
            emit(&inst.to_json(), args.output.as_deref())?;
        }
        Command::Sweep {
            config,
            output,
            summary,
        } => {
            let text = fs::read_to_string(&config).with_context(|| format!("cannot read {}", config.display()))?;
            let config = SweepConfig::from_toml(&text).with_context(|| format!("in {}", config.display()))?;
            let file = File::create(&output).with_context(|| format!("cannot create {}", output.display()))?;
            let rows = run_sweep(&config, Some(BufWriter::new(file)))?;
            log::info!("wrote {} rows to {}", rows.len(), output.display());
            if summary {
                print!("{}", summarize(&rows));
            }
        }
        Command::Fixtures { dir } => {
            fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
            for (name, inst) in fixtures::all() {
                let path = dir.join(format!("{name}.json"));
                emit(&inst.to_json(), Some(&path))?;
                println!("{}", path.display());
            }
            let path = dir.join("ten_node.optimal.json");
            emit(
                &fixtures::ten_node_optimum(&fixtures::ten_node()).to_json(),
                Some(&path),
            )?;
            println!("{}", path.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
