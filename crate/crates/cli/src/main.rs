//! `hetdd`: run heterogeneous domain-decomposition experiments from a plain
//! key=value config and turn the results into CSV tables and SVG plots.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hetdd_cli::error::{CliError, Result};
use hetdd_cli::{cmd_check, cmd_plot, cmd_slopes, cmd_solve, cmd_sweep, RunConfig};

#[derive(Parser)]
#[command(name = "hetdd", version, about = "Viscous/inviscid coupling experiments for 1D advection-reaction-diffusion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Run configuration file (key = value with [problem]/[grid]/[sweep]/[output] sections).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads for the sweep (default: all available processors).
    #[arg(long)]
    jobs: Option<usize>,
    /// Output directory (default: current directory).
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Override a config key, e.g. `--override problem.nu=1e-2` (repeatable).
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one (method, viscosity) cell and dump fields and traces.
    Solve {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the viscosity sweep and write errors.csv.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Recompute per-method convergence slopes from an errors.csv table.
    Slopes {
        /// Path to an errors.csv produced by `sweep`.
        #[arg(long, default_value = "errors.csv")]
        errors: PathBuf,
    },
    /// Render log-log SVG plots from an errors.csv table.
    Plot {
        /// Path to an errors.csv produced by `sweep`.
        #[arg(long, default_value = "errors.csv")]
        errors: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run the built-in solver self-checks.
    Check,
}

fn load_config(common: &CommonArgs) -> Result<RunConfig> {
    let text = match &common.config {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?,
        None => String::new(),
    };
    RunConfig::parse(&text, &common.overrides)
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve { common } => {
            let cfg = load_config(&common)?;
            cmd_solve(&cfg, &common.out)
        }
        Command::Sweep { common } => {
            let cfg = load_config(&common)?;
            cmd_sweep(&cfg, &common.out, common.jobs).map(|_| ())
        }
        Command::Slopes { errors } => {
            let report = cmd_slopes(&errors)?;
            print!("{report}");
            Ok(())
        }
        Command::Plot { errors, out } => cmd_plot(&errors, &out, ""),
        Command::Check => {
            let report = cmd_check()?;
            print!("{report}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
