use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use isoenergy_cli::commands::{self, resolve_out_dir};
use isoenergy_cli::{CliError, ExperimentConfig};

#[derive(Parser)]
#[command(name = "isoenergy", version, about = "Energy measurements by an observer inside an isolated system")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML experiment config; each command has a built-in default.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides ISOENERGY_OUT and the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Eigen-residual convergence studies of the exact solutions.
    Verify(Common),
    /// AR precision sweep over the total energy.
    Regimes(Common),
    /// Internal versus external precision summary.
    Table1(Common),
    /// One measurement, printed as JSON.
    Measure {
        #[command(flatten)]
        common: Common,
        /// Write the post-measurement pointer state (momentum) here.
        #[arg(long)]
        dump_field: Option<PathBuf>,
    },
    /// External-duration statistics of one MP measurement, printed as JSON.
    TextStats(Common),
}

fn load(common: &Common, default: &str) -> Result<ExperimentConfig, CliError> {
    match &common.config {
        Some(p) => ExperimentConfig::load(p),
        None => ExperimentConfig::from_toml(default),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let common = match &cli.command {
        Command::Verify(c) | Command::Regimes(c) | Command::Table1(c) | Command::TextStats(c) => c,
        Command::Measure { common, .. } => common,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(common.jobs)
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    pool.install(|| match &cli.command {
        Command::Verify(c) => {
            let cfg = load(c, include_str!("../configs/verify.toml"))?;
            let out = resolve_out_dir(c.out.as_deref(), &cfg);
            let rep = commands::cmd_verify(&cfg, &out)?;
            println!("verify: {} studies passed, output in {}", rep.convergence.len() / cfg.grid.resolutions.len(), out.display());
            Ok(())
        }
        Command::Regimes(c) => {
            let cfg = load(c, include_str!("../configs/regimes.toml"))?;
            let out = resolve_out_dir(c.out.as_deref(), &cfg);
            let rows = commands::cmd_regimes(&cfg, &out)?;
            println!("regimes: {} rows, output in {}", rows.len(), out.display());
            Ok(())
        }
        Command::Table1(c) => {
            let cfg = load(c, include_str!("../configs/table1.toml"))?;
            let out = resolve_out_dir(c.out.as_deref(), &cfg);
            let rows = commands::cmd_table1(&cfg, &out)?;
            println!("table1: {} rows, output in {}", rows.len(), out.display());
            Ok(())
        }
        Command::Measure { common, dump_field } => {
            let cfg = load(common, include_str!("../configs/measure.toml"))?;
            let rec = commands::cmd_measure(&cfg, dump_field.as_deref())?;
            println!("{}", serde_json::to_string_pretty(&rec)?);
            Ok(())
        }
        Command::TextStats(c) => {
            let cfg = load(c, include_str!("../configs/measure.toml"))?;
            let stats = commands::cmd_text_stats(&cfg)?;
            println!("{}", serde_json::to_string_pretty(&stats)?);
            Ok(())
        }
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
