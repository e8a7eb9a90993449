use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ipstar_core::sieve::PrimeSieve;
use ipstar_lab::config::DEFAULT_CACHE_DIR;
use ipstar_lab::{emit, run_experiment, ExperimentConfig, ExperimentKind, LabError, Result};
use serde_json::{Map, Value};

#[derive(Parser)]
#[command(
    name = "ipstar-lab",
    version,
    about = "Deterministic finite-scale largeness experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Override a config key, e.g. `-p k=4` or `-p 'rs=[2,3]'`.
    #[arg(short = 'p', long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_parser = ["json", "csv"])]
    format: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Describe what the experiment checks and exit.
    #[arg(long)]
    explain: bool,
}

#[derive(Subcommand)]
enum Command {
    /// List registered experiments.
    List,
    /// Run the experiment described by a JSON config file.
    Run {
        #[arg(short, long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Sieve primes up to a limit through the on-disk cache and print the count.
    Sieve {
        limit: u64,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        #[arg(long, default_value_t = ipstar_core::sieve::DEFAULT_MAX_LIMIT)]
        max_limit: u64,
    },
    #[command(name = "ipstar-subgroup")]
    IpstarSubgroup(Common),
    #[command(name = "avoid-zx")]
    AvoidZx(Common),
    Jdiff(Common),
    #[command(name = "cr-diff")]
    CrDiff(Common),
    #[command(name = "goswami-primes")]
    GoswamiPrimes(Common),
    #[command(name = "goswami-generic")]
    GoswamiGeneric(Common),
    Freesemigroup(Common),
    #[command(name = "zx-partition")]
    ZxPartition(Common),
    #[command(name = "delta-r-primes")]
    DeltaRPrimes(Common),
}

fn execute(base: Value, common: &Common) -> Result<()> {
    let mut overrides = common.params.clone();
    if let Some(o) = &common.output {
        overrides.push(format!("output={}", Value::from(o.to_string_lossy().into_owned())));
    }
    if let Some(f) = &common.format {
        overrides.push(format!("format={f}"));
    }
    if let Some(s) = common.seed {
        overrides.push(format!("seed={s}"));
    }
    if let Some(d) = &common.cache_dir {
        overrides.push(format!("cache_dir={}", Value::from(d.to_string_lossy().into_owned())));
    }
    let cfg = ExperimentConfig::with_overrides(base, &overrides)?;
    if common.explain {
        println!("{}: {}", cfg.experiment, cfg.experiment.explain());
        return Ok(());
    }
    let report = run_experiment(&cfg)?;
    if let Some(text) = emit(&report, &cfg)? {
        print!("{text}");
    }
    Ok(())
}

fn named(kind: ExperimentKind, common: &Common) -> Result<()> {
    let mut base = Map::new();
    base.insert("experiment".into(), Value::from(kind.name()));
    execute(Value::Object(base), common)
}

fn main_inner(cli: Cli) -> Result<()> {
    use ExperimentKind as K;
    match cli.command {
        Command::List => {
            for k in ExperimentKind::ALL {
                println!("{k}");
            }
            Ok(())
        }
        Command::Run { config, common } => {
            let text = std::fs::read_to_string(&config)?;
            let base: Value = serde_json::from_str(&text)
                .map_err(|e| LabError::InvalidConfig(format!("{}: {e}", config.display())))?;
            execute(base, &common)
        }
        Command::Sieve {
            limit,
            cache_dir,
            max_limit,
        } => {
            let dir = cache_dir.unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR));
            let (sieve, status) = PrimeSieve::load_or_compute(limit, &dir, max_limit)?;
            println!("pi({limit}) = {} (cache {status:?})", sieve.count());
            Ok(())
        }
        Command::IpstarSubgroup(c) => named(K::IpstarSubgroup, &c),
        Command::AvoidZx(c) => named(K::AvoidZx, &c),
        Command::Jdiff(c) => named(K::Jdiff, &c),
        Command::CrDiff(c) => named(K::CrDiff, &c),
        Command::GoswamiPrimes(c) => named(K::GoswamiPrimes, &c),
        Command::GoswamiGeneric(c) => named(K::GoswamiGeneric, &c),
        Command::Freesemigroup(c) => named(K::FreeSemigroup, &c),
        Command::ZxPartition(c) => named(K::ZxPartition, &c),
        Command::DeltaRPrimes(c) => named(K::DeltaRPrimes, &c),
    }
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
