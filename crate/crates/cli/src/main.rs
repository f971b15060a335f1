use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand};

use rankone_cli::{cmd_converge, cmd_find, cmd_lyapunov, cmd_sweep, CliError, RunConfig};

/// Kicked Hopf return maps: Misiurewicz search, parameter sweeps,
/// convergence runs and orbit diagnostics.
///
/// Exit codes: 0 success, 2 configuration error, 3 search exhausted,
/// 4 numerical or runtime failure.
#[derive(Debug, Parser)]
#[command(name = "rankone", version)]
struct Cli {
    /// TOML configuration; missing keys take the defaults listed below.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Overrides `seed`.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Overrides `workers`; 1 gives bit-reproducible output.
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,
    /// Overrides `out`, the parent of the run directories.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search for a Misiurewicz pair (a*, L*) with L* ≥ search.l_lo.
    Find,
    /// Estimate λ₁ over the (a, L, μ) grid of the sweep section.
    Sweep,
    /// Fit convergence rates to the singular limit.
    Converge,
    /// Diagnostics along one orbit of the map in the diagnostics section.
    Lyapunov,
    /// Print the default configuration.
    Defaults,
}

fn load(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut config = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        config.seed = s;
    }
    if let Some(w) = cli.workers {
        config.workers = w;
    }
    if let Some(o) = &cli.out {
        config.out = o.clone();
    }
    Ok(config)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Command::Defaults = cli.command {
        print!("{}", RunConfig::default().to_toml());
        return Ok(());
    }
    let config = load(cli)?;
    let outcome = match cli.command {
        Command::Find => cmd_find(&config)?,
        Command::Sweep => cmd_sweep(&config)?,
        Command::Converge => cmd_converge(&config)?,
        Command::Lyapunov => cmd_lyapunov(&config)?,
        Command::Defaults => unreachable!(),
    };
    for line in &outcome.lines {
        println!("{line}");
    }
    println!("wrote {}", outcome.dir.display());
    Ok(())
}

fn main() -> ExitCode {
    let defaults = format!("Defaults:\n\n{}", RunConfig::default().to_toml());
    let matches = Cli::command().after_long_help(defaults).get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
