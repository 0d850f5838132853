//! `ctqw`: command-line front end for the quantum walk library.

mod commands;
mod config;
mod error;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Outcome, Settings};
use config::{BatchConfig, ExperimentConfig, Family, GraphSource, Mode};
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "ctqw", version, about = "Continuous-time quantum walks on graphs with fully connected vertices")]
struct Cli {
    /// JSON experiment configuration
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    /// Exit with status 2 when a reported check fails
    #[arg(long, global = true)]
    strict: bool,
    /// Seed for random graph generators (overrides graph.seed)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// End of the time grid (overrides time.t_max)
    #[arg(long = "t-max", global = true, value_name = "REAL")]
    t_max: Option<f64>,
    /// Number of grid intervals (overrides time.steps)
    #[arg(long, global = true, value_name = "INT")]
    steps: Option<usize>,
    /// Assertion tolerance used when the config has no `tol`
    #[arg(long = "default-tol", global = true, env = "CTQW_DEFAULT_TOL", value_name = "REAL")]
    default_tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evolve an initial state and write the probability trace
    Evolve,
    /// Spatial search for fully connected targets
    Search,
    /// Transport efficiency to fully connected traps
    Transport,
    /// Compare the walks from the hubs of two graphs
    Certify {
        #[arg(long, value_enum)]
        mode: Option<Mode>,
    },
    /// Tabulate N - f(N) and N - g(N)
    PropIb {
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Write a generated graph as JSON
    GenGraph {
        #[arg(long, value_enum)]
        family: Option<Family>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        hubs: Option<usize>,
        /// File name inside the output directory
        #[arg(long, default_value = "graph.json")]
        file: PathBuf,
    },
    /// Run every entry of `{"runs": [...]}` concurrently, one subdirectory each
    Batch,
}

fn load_config(path: Option<&Path>) -> Result<ExperimentConfig, CliError> {
    match path {
        Some(p) => ExperimentConfig::load(p),
        None => Ok(ExperimentConfig::default()),
    }
}

fn run_named(command: &str, cfg: &ExperimentConfig, settings: &Settings) -> Result<Outcome, CliError> {
    match command {
        "evolve" => commands::cmd_evolve(cfg, settings),
        "search" => commands::cmd_search(cfg, settings),
        "transport" => commands::cmd_transport(cfg, settings),
        "certify" => commands::cmd_certify(cfg, settings, None),
        "prop-ib" => commands::cmd_prop_ib(cfg, settings, None),
        "gen-graph" => commands::cmd_gen_graph(cfg, settings, &GraphSource::default(), Path::new("graph.json")),
        other => Err(CliError::Validation(format!("command: unknown or unsupported in batch: `{other}`"))),
    }
}

fn run_batch(path: Option<&Path>, settings: &Settings) -> Result<Vec<Outcome>, CliError> {
    let path = path.ok_or_else(|| CliError::Validation("batch needs --config".into()))?;
    let batch = BatchConfig::load(path)?;
    let mut jobs = Vec::new();
    for (k, run) in batch.runs.iter().enumerate() {
        let command = run
            .command
            .clone()
            .ok_or_else(|| CliError::Validation(format!("runs[{k}].command: missing")))?;
        let name = run.name.clone().unwrap_or_else(|| format!("run{k:03}"));
        if name.is_empty() || name.contains(['/', '\\']) || name == "." || name == ".." {
            return Err(CliError::Validation(format!("runs[{k}].name: `{name}` is not a plain directory name")));
        }
        if jobs.iter().any(|(n, _, _)| n == &name) {
            return Err(CliError::Validation(format!("runs[{k}].name: duplicate `{name}`")));
        }
        jobs.push((name, command, run));
    }
    let results: Vec<Result<Outcome, CliError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|(name, command, run)| {
                let settings = Settings {
                    out: settings.out.join(name),
                    ..settings.clone()
                };
                scope.spawn(move || run_named(command, run, &settings))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("batch worker panicked")).collect()
    });
    results.into_iter().collect()
}

fn run(cli: &Cli) -> Result<Vec<Outcome>, CliError> {
    let settings = Settings {
        out: cli.out.clone(),
        seed: cli.seed,
        t_max: cli.t_max,
        steps: cli.steps,
        default_tol: cli.default_tol,
    };
    let config = cli.config.as_deref();
    if matches!(cli.command, Command::Batch) {
        return run_batch(config, &settings);
    }
    let cfg = load_config(config)?;
    let outcome = match &cli.command {
        Command::Evolve => commands::cmd_evolve(&cfg, &settings),
        Command::Search => commands::cmd_search(&cfg, &settings),
        Command::Transport => commands::cmd_transport(&cfg, &settings),
        Command::Certify { mode } => commands::cmd_certify(&cfg, &settings, *mode),
        Command::PropIb { n_max } => commands::cmd_prop_ib(&cfg, &settings, *n_max),
        Command::GenGraph { family, n, p, hubs, file } => {
            let flags = GraphSource {
                family: *family,
                n: *n,
                p: *p,
                hubs: *hubs,
                ..Default::default()
            };
            commands::cmd_gen_graph(&cfg, &settings, &flags, file)
        }
        Command::Batch => unreachable!("handled above"),
    }?;
    Ok(vec![outcome])
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(outcomes) => {
            let mut failed = false;
            for o in &outcomes {
                let status = match o.pass {
                    Some(true) => " [PASS]",
                    Some(false) => " [FAIL]",
                    None => "",
                };
                println!("{}{status}", o.message);
                for f in &o.files {
                    println!("  wrote {}", f.display());
                }
                failed |= o.pass == Some(false);
            }
            if failed && cli.strict {
                eprintln!("error: check failed under --strict");
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
