use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use banditlab_cli::{config, plot, resolve_workers, run, verify};

/// Monte Carlo laboratory for multi-armed bandit policies.
#[derive(Parser)]
#[command(name = "banditlab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config and write CSV artifacts.
    Run {
        /// Path to the JSON experiment config (see `banditlab schema`).
        #[arg(long)]
        config: PathBuf,
        /// Output directory for raw.csv, aggregate.csv and manifest.json.
        #[arg(long)]
        out: PathBuf,
        /// Override the master seed from the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (falls back to $BANDITLAB_WORKERS, then all cores).
        /// Never changes results, only wall-clock time.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Run the statistical verification battery; exit 0 iff every check passes.
    Verify {
        /// Master seed of the battery.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Render <out>/aggregate.csv as a standalone SVG at <out>/regret.svg.
    Plot {
        /// Directory holding aggregate.csv.
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the JSON schema of the experiment config.
    Schema,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    match dispatch() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Run { config: config_path, out, seed, workers } => {
            let text = std::fs::read_to_string(&config_path)
                .with_context(|| format!("reading config {}", config_path.display()))?;
            let mut parsed = config::parse_config(&text)?;
            if let Some(seed) = seed {
                config::override_seed(&mut parsed, seed);
            }
            let artifacts = run::execute(&parsed, &out, resolve_workers(workers), true)?;
            println!("wrote {}", artifacts.raw_csv.display());
            println!("wrote {}", artifacts.aggregate_csv.display());
            if let Some(r) = &artifacts.realized_csv {
                println!("wrote {}", r.display());
            }
            println!("wrote {}", artifacts.manifest.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { seed } => {
            let seed = seed.unwrap_or(verify::DEFAULT_VERIFY_SEED);
            let mut stdout = std::io::stdout().lock();
            let all_pass = verify::verify(seed, &mut stdout)?;
            stdout.flush()?;
            Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Plot { out } => {
            let svg = plot::plot(&out)?;
            println!("wrote {}", svg.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Schema => {
            println!("{}", serde_json::to_string_pretty(&config::schema_json())?);
            Ok(ExitCode::SUCCESS)
        }
    }
}
