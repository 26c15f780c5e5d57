//! The `betadyne` command-line interface.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::Value;

use crate::error::{Error, Result};
use output::{Format, OutputDir};

#[derive(Debug, Parser)]
#[command(
    name = "betadyne",
    version,
    about = "Displaced-jump unravelings, no-jump Hamiltonians and exceptional points"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Built-in model: gain-loss-qubit, three-level, kerr or driven-qubit.
    #[arg(long, global = true, value_name = "NAME")]
    pub scenario: Option<String>,
    /// Override a dotted config path, e.g. `--set params.omega=0.75`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: BETADYNE_THREADS, else all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Branch-tracked NHH eigenvalues along a one-parameter sweep.
    Spectrum,
    /// Eigenvector overlap and eigenvalue gap over a complex beta grid.
    OverlapMap,
    /// Locate an exceptional point over beta or a model parameter.
    EpFind,
    /// Quantum-jump ensemble against the master equation.
    Trajectories,
    /// Run the invariance property suite.
    Validate,
    /// Write a model and its spectra.
    ScenarioDump,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::OverlapMap => "overlap-map",
            Command::EpFind => "ep-find",
            Command::Trajectories => "trajectories",
            Command::Validate => "validate",
            Command::ScenarioDump => "scenario-dump",
        }
    }
}

/// Config file, then `--scenario`, then `--set` in order, then `--seed`.
pub fn resolve_config(cli: &Cli) -> Result<Value> {
    let mut cfg = config::load(cli.config.as_deref())?;
    if let Some(name) = &cli.scenario {
        config::set_path(&mut cfg, "scenario", Value::String(name.clone()))?;
    }
    for arg in &cli.set {
        let (key, value) = config::parse_override(arg)?;
        config::set_path(&mut cfg, &key, value)?;
    }
    if let Some(seed) = cli.seed {
        config::set_path(&mut cfg, "seed", Value::from(seed))?;
    }
    config::check_keys(&cfg)?;
    Ok(cfg)
}

fn thread_count(cli: &Cli) -> Result<Option<usize>> {
    if let Some(n) = cli.threads {
        return Ok(Some(n));
    }
    match std::env::var("BETADYNE_THREADS") {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Config(format!("BETADYNE_THREADS must be a positive integer, got '{s}'"))),
        Err(_) => Ok(None),
    }
}

fn execute(cli: &Cli, argv: Vec<String>) -> Result<i32> {
    let started = Instant::now();
    let cfg = resolve_config(cli)?;
    let seed = match cfg.get("seed") {
        None => 0,
        Some(v) => v.as_u64().ok_or_else(|| Error::Config("seed must be a non-negative integer".into()))?,
    };
    let mut out = OutputDir::create(&cli.out)?;
    let code = match cli.command {
        Command::Spectrum => commands::spectrum(&cfg, cli.format, &mut out)?,
        Command::OverlapMap => commands::overlap_map(&cfg, cli.format, &mut out)?,
        Command::EpFind => commands::ep_find(&cfg, &mut out)?,
        Command::Trajectories => commands::trajectories(&cfg, seed, cli.format, &mut out)?,
        Command::Validate => commands::validate(&cfg, seed, &mut out)?,
        Command::ScenarioDump => commands::scenario_dump(&cfg, cli.format, &mut out)?,
    };
    let manifest = out.finish(argv, &cfg, started.elapsed().as_secs_f64())?;
    log::info!("{} finished; manifest at {}", cli.command.name(), manifest.display());
    Ok(code)
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let argv: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    let result = thread_count(&cli).and_then(|threads| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = threads {
            if n == 0 {
                return Err(Error::Config("thread count must be positive".into()));
            }
            builder = builder.num_threads(n);
        }
        let pool = builder.build().map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        pool.install(|| execute(&cli, argv))
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                1
            } else {
                2
            }
        }
    }
}
