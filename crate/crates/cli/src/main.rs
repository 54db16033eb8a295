//! `lrspread`: correlation spreading in long-range spin lattices.
//!
//! Exit status: 0 success, 1 i/o or unexpected failure, 2 invalid
//! configuration, 3 parameters outside a formula's domain, 4 Krylov
//! propagation failed to converge.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use commands::Pipeline;
use config::ConfigError;

#[derive(Debug, Parser)]
#[command(name = "lrspread", version, about = "Correlation spreading in long-range spin lattices")]
struct Cli {
    /// JSON file with parameters for the subcommand; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory [default: $LRSPREAD_OUT/<subcommand> or runs/<subcommand>].
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads [default: all cores].
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form long-range Ising correlation field from |+>^N.
    Ising(commands::IsingCmd),
    /// Signal probability of the product-state channel.
    ChannelProduct(commands::ChannelProductCmd),
    /// Coupling-sum exponent and arrival times of the GHZ channel.
    ChannelGhz(commands::ChannelGhzCmd),
    /// Exact-diagonalization XXZ quench from the staggered state.
    XxzEd(commands::XxzCmd),
    /// Causal front and power-law fit of a stored correlation field.
    Front(commands::FrontCmd),
    /// Finite-size scaling of Ising correlations at fixed rescaled time.
    Scaling(commands::ScalingCmd),
    /// Compares a stored front with the long-range causal boundary.
    BoundCompare(commands::BoundCompareCmd),
}

#[derive(Serialize)]
struct Manifest<'a, C> {
    subcommand: &'a str,
    version: &'a str,
    workers: usize,
    config: &'a C,
    summary: &'a str,
}

struct Global {
    config: Option<PathBuf>,
    out: Option<PathBuf>,
    workers: usize,
}

fn execute<C: Pipeline>(name: &str, flags: C, global: &Global) -> anyhow::Result<()> {
    let mut cfg = match &global.config {
        Some(path) => config::merge(config::read_file::<C>(path)?, &flags)?,
        None => flags,
    };
    cfg.fill_defaults();
    let target = global.out.clone().unwrap_or_else(|| output::default_out_dir(name));
    let staging = output::Staging::new(&target)?;
    let summary = cfg.run(staging.path())?;
    let manifest = Manifest {
        subcommand: name,
        version: env!("CARGO_PKG_VERSION"),
        workers: global.workers,
        config: &cfg,
        summary: &summary,
    };
    staging.commit(&manifest)?;
    println!("{summary} -> {}", target.display());
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ConfigError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<lrspread::Error>() {
        Some(lrspread::Error::Input(_)) => 2,
        Some(lrspread::Error::Domain(_) | lrspread::Error::Precondition(_) | lrspread::Error::EmptyFront { .. }) => 3,
        Some(lrspread::Error::Convergence { .. }) => 4,
        _ => 1,
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(config::config_error("--workers must be positive"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(w).build_global()?;
    }
    let global = Global { config: cli.config, out: cli.out, workers: rayon::current_num_threads() };
    match cli.command {
        Command::Ising(c) => execute("ising", c, &global),
        Command::ChannelProduct(c) => execute("channel-product", c, &global),
        Command::ChannelGhz(c) => execute("channel-ghz", c, &global),
        Command::XxzEd(c) => execute("xxz-ed", c, &global),
        Command::Front(c) => execute("front", c, &global),
        Command::Scaling(c) => execute("scaling", c, &global),
        Command::BoundCompare(c) => execute("bound-compare", c, &global),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            e.print().ok();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
