//! `anneal`: run annealing experiments, verify kernel reductions, list
//! registered components.

mod config;
mod run;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anneal_core::kernels::{AccepterKind, VisitorKind};
use anneal_core::reductions::{acceptance_grid_deviation, gsa_vs_boltzmann, visit_vs_cauchy};
use anneal_core::{CoolerKind, Preset, Registry};
use clap::{Parser, Subcommand, ValueEnum};

use config::{Engine, ExperimentConfig, Overrides, Plan};

const EXIT_CONFIG: u8 = 2;
const EXIT_ENGINE: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(name = "anneal", version, about = "Simulated annealing experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment per seed and write trace CSV and summary JSON files.
    Run(RunArgs),
    /// Check that GSA reduces to the Boltzmann and Cauchy variants.
    VerifyReductions(VerifyArgs),
    /// Print registered component names, one per line.
    List {
        #[arg(value_enum)]
        what: ListKind,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Bsa,
    Fsa,
    Gsa,
    Custom,
}

impl From<PresetArg> for Preset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::Bsa => Preset::Bsa,
            PresetArg::Fsa => Preset::Fsa,
            PresetArg::Gsa => Preset::Gsa,
            PresetArg::Custom => Preset::Custom,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ListKind {
    Objectives,
    Coolers,
    Accepters,
    Visitors,
}

#[derive(clap::Args)]
struct RunArgs {
    /// JSON experiment config.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed; repeat for several runs. Defaults to ANNEAL_SEED, then 0.
    #[arg(long = "seed")]
    seeds: Vec<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Registered objective name.
    #[arg(long)]
    objective: Option<String>,
    #[arg(long, value_enum)]
    engine: Option<Engine>,
    #[arg(long, value_enum)]
    preset: Option<PresetArg>,
    /// Visiting shape.
    #[arg(long)]
    qv: Option<f64>,
    /// Acceptance shape.
    #[arg(long)]
    qa: Option<f64>,
    #[arg(long)]
    tinit: Option<f64>,
    #[arg(long)]
    max_epochs: Option<u64>,
    /// Steps per epoch of the quench engine.
    #[arg(long)]
    steps: Option<u64>,
    /// Steps per temperature of the chain engine.
    #[arg(long)]
    nsim: Option<u64>,
    #[arg(long)]
    nchains: Option<usize>,
    /// Keep every N-th step in the trace.
    #[arg(long)]
    trace_stride: Option<u64>,
    /// Also write an N x N grid of objective values.
    #[arg(long, value_name = "N")]
    export_grid: Option<usize>,
    /// Validate and print the resolved plan without running.
    #[arg(long)]
    dry_run: bool,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 2)]
    dims: usize,
    /// Number of seeds for the trajectory check.
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    /// Draws per side of the KS check.
    #[arg(long, default_value_t = 100_000)]
    n_samples: usize,
    /// Visiting shape of the GSA side of the trajectory check.
    #[arg(long, default_value_t = 1.0)]
    qv: f64,
    /// Acceptance shape of the GSA side of the trajectory check.
    #[arg(long, default_value_t = 1.0)]
    qa: f64,
    #[arg(long, default_value_t = 100)]
    epochs: u64,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run(args) => cmd_run(args),
        Command::VerifyReductions(args) => cmd_verify(args),
        Command::List { what } => {
            cmd_list(what);
            ExitCode::SUCCESS
        }
    }
}

fn config_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("config error: {msg}");
    ExitCode::from(EXIT_CONFIG)
}

fn env_seed() -> Result<Option<u64>, String> {
    match std::env::var("ANNEAL_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| format!("ANNEAL_SEED is not an unsigned integer: {s:?}")),
        Err(_) => Ok(None),
    }
}

fn cmd_run(args: RunArgs) -> ExitCode {
    let file = match &args.config {
        Some(path) => {
            let text = match fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => return config_error(format!("{}: {e}", path.display())),
            };
            match text.parse::<ExperimentConfig>() {
                Ok(c) => c,
                Err(e) => return config_error(format!("{}: {e}", path.display())),
            }
        }
        None => ExperimentConfig::default(),
    };
    let env_seed = match env_seed() {
        Ok(s) => s,
        Err(e) => return config_error(e),
    };
    let flags = Overrides {
        objective: args.objective,
        seeds: args.seeds,
        out: args.out,
        engine: args.engine,
        preset: args.preset.map(Preset::from),
        q_v: args.qv,
        q_a: args.qa,
        t_init: args.tinit,
        max_epochs: args.max_epochs,
        steps: args.steps,
        n_sim: args.nsim,
        n_chains: args.nchains,
        trace_stride: args.trace_stride,
    };
    let plan = match Plan::resolve(file, &flags, env_seed) {
        Ok(p) => p,
        Err(e) => return config_error(e),
    };
    if let Some(n) = args.export_grid {
        let dims = plan.build_objective().map(|o| o.dims()).unwrap_or(0);
        if dims != 2 || n < 2 {
            return config_error(format!(
                "--export-grid needs a 2-D objective and N >= 2 (objective has {dims} dims, N = {n})"
            ));
        }
    }
    if args.dry_run {
        println!("{plan:#?}");
        return ExitCode::SUCCESS;
    }

    if let Some(n) = args.export_grid {
        match run::export_grid(&plan, n) {
            Ok(p) => println!("grid {}", p.display()),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_ENGINE);
            }
        }
    }
    let outputs = match run::run_all(&plan) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_ENGINE);
        }
    };
    let mut failed = false;
    for out in outputs {
        match out {
            Ok(o) => println!(
                "{} best_val={:?} converged={} epochs={} rows={} trace={} summary={}",
                o.run_id,
                o.summary.best_val,
                o.summary.converged,
                o.summary.epochs_run,
                o.rows,
                o.trace_path.display(),
                o.summary_path.display()
            ),
            Err(e) => {
                eprintln!("engine error: {e}");
                failed = true;
            }
        }
    }
    if failed {
        ExitCode::from(EXIT_ENGINE)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_verify(args: VerifyArgs) -> ExitCode {
    let seeds: Vec<u64> = (0..args.seeds).collect();
    let trajectory = match gsa_vs_boltzmann(args.dims, &seeds, args.epochs, args.qv, args.qa) {
        Ok(t) => t,
        Err(e) => return config_error(e),
    };
    let ks = match visit_vs_cauchy(2.0, args.dims, args.n_samples, 0) {
        Ok(k) => k,
        Err(e) => return config_error(e),
    };
    let grid = acceptance_grid_deviation();

    let identical = trajectory.max_deviation <= 1e-12;
    let cauchy_ok = ks.p_value > 0.01;
    let grid_ok = grid <= 1e-12;
    println!(
        "trajectory gsa(q_v={}, q_a={}) vs bsa: dims={} seeds={} epochs={}",
        args.qv, args.qa, args.dims, args.seeds, args.epochs
    );
    for (seed, dev) in &trajectory.per_seed {
        println!("  seed {seed}: max deviation {dev:e}");
    }
    println!(
        "  max deviation {:e} -> {}",
        trajectory.max_deviation,
        if identical { "identical" } else { "NOT identical" }
    );
    println!(
        "visiting gsa(q_v=2) vs cauchy: n={} KS D={:.6} p={:.4} -> {}",
        args.n_samples,
        ks.statistic,
        ks.p_value,
        if cauchy_ok { "pass" } else { "FAIL" }
    );
    println!(
        "acceptance gsa(q_a=1) vs metropolis: max deviation {grid:e} -> {}",
        if grid_ok { "pass" } else { "FAIL" }
    );
    if identical && cauchy_ok && grid_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY)
    }
}

fn cmd_list(what: ListKind) {
    let names: Vec<String> = match what {
        ListKind::Objectives => Registry::with_builtins().names().map(String::from).collect(),
        ListKind::Coolers => CoolerKind::ALL.iter().map(|k| k.name().into()).collect(),
        ListKind::Accepters => AccepterKind::ALL.iter().map(|k| k.name().into()).collect(),
        ListKind::Visitors => VisitorKind::ALL.iter().map(|k| k.name().into()).collect(),
    };
    for n in names {
        println!("{n}");
    }
}
