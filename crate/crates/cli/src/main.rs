//! `wilton`: command-line experiments for periodic gravity-capillary waves.

mod commands;
mod config;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{CmdError, Ctx};
use config::RunConfig;

#[derive(Parser)]
#[command(name = "wilton", version, about = "Resonances, normal forms and water-wave simulations")]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Parent directory of the run directories.
    #[arg(long, global = true, default_value = "runs")]
    out: PathBuf,
    /// RNG seed; overrides the config value.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; overrides the config value.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate exact three-wave resonances.
    Resonances,
    /// Smallest nonzero phase mismatch.
    MinGap,
    /// Surface tension of the (2j; j, j) resonance.
    Wilton,
    /// Export the cubic coefficient table.
    Coeffs,
    /// Run the property checks.
    Verify,
    /// Integrate the resonant normal-form flow.
    BnfFlow,
    /// Integrate the full water-wave system.
    WwSim,
    /// Exit-time sweep over amplitudes.
    Lifespan,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let text = match &cli.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(t) => Some(t),
            Err(e) => {
                eprintln!("cannot read {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None => None,
    };
    let cfg = match RunConfig::parse(text.as_deref().unwrap_or("")) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let threads = cli.threads.unwrap_or(cfg.threads);
    if threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("cannot configure thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let ctx = Ctx { cfg: &cfg, text: text.as_deref(), out: &cli.out, seed: cli.seed.unwrap_or(cfg.seed) };
    let result = match cli.cmd {
        Cmd::Resonances => commands::resonances(&ctx),
        Cmd::MinGap => commands::min_gap_cmd(&ctx),
        Cmd::Wilton => commands::wilton(&ctx),
        Cmd::Coeffs => commands::coeffs(&ctx),
        Cmd::Verify => commands::verify(&ctx),
        Cmd::BnfFlow => commands::bnf_flow(&ctx),
        Cmd::WwSim => commands::ww_sim(&ctx),
        Cmd::Lifespan => commands::lifespan(&ctx),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CmdError::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CmdError::Failed(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
