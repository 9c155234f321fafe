use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use ifir_core::harness::{
    export_campaign, export_sweep, run_campaign, run_sweep, Format, ScenarioConfig, SweepAxis,
};
use std::path::PathBuf;
use std::process::ExitCode;

/// Monte-Carlo simulator for adaptive interpolated FIR CDMA receivers.
#[derive(Parser, Debug)]
#[command(name = "ifir", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug)]
struct Common {
    /// JSON scenario configuration; missing fields take defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; the summary is printed to stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    runs: Option<usize>,
    #[arg(long, global = true)]
    symbols: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Averaged learning curves for one scenario (default).
    Run,
    /// Final BER/SINR across Eb/N0 values or user counts.
    Sweep {
        /// Comma-separated Eb/N0 values in dB.
        #[arg(long, value_delimiter = ',', conflicts_with = "users")]
        ebn0: Vec<f64>,
        /// Comma-separated user counts.
        #[arg(long, value_delimiter = ',')]
        users: Vec<usize>,
    },
}

fn load_config(c: &Common) -> Result<ScenarioConfig> {
    let mut cfg = match &c.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = c.seed {
        cfg.seed = seed;
    }
    if let Some(runs) = c.runs {
        cfg.runs = runs;
    }
    if let Some(symbols) = c.symbols {
        cfg.symbols = symbols;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<()> {
    let cfg = load_config(&cli.common)?;
    match cli.command.unwrap_or(Command::Run) {
        Command::Run => {
            let campaign = run_campaign(&cfg)?;
            if let Some(out) = &cli.common.out {
                export_campaign(&campaign, &cfg, out, cli.common.format)
                    .with_context(|| format!("exporting to {}", out.display()))?;
            }
            println!("{}", serde_json::to_string_pretty(&campaign.mean.summary)?);
        }
        Command::Sweep { ebn0, users } => {
            let axis = match (ebn0.is_empty(), users.is_empty()) {
                (false, true) => SweepAxis::EbN0Db(ebn0),
                (true, false) => SweepAxis::Users(users),
                _ => bail!("sweep needs exactly one of --ebn0 or --users"),
            };
            let points = run_sweep(&cfg, &axis)?;
            if let Some(out) = &cli.common.out {
                export_sweep(&points, &cfg, out, cli.common.format)
                    .with_context(|| format!("exporting to {}", out.display()))?;
            }
            println!("{}", serde_json::to_string_pretty(&points)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
