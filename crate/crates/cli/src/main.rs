use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use luttrap::{execute, resolve_config, CliError, Task};

#[derive(Parser)]
#[command(name = "luttrap", version, about = "Interacting fermions in a 1D harmonic trap via the Luttinger model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Real-space density profile, or the free/repulsive/attractive bundle when `figure` is configured
    Density(Common),
    /// Momentum distribution
    Momentum(Common),
    /// Occupation matrix entries with sum-rule and particle-hole diagnostics
    Occupations(Common),
    /// IM1 momentum/density duality check
    Duality(Common),
    /// Exact-diagonalization cross-check
    Oracle(Common),
    /// Pair-potential matrix elements and coupling estimates
    Couplings(Common),
    /// Run the invariant suites for a model
    Validate(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct Common {
    /// JSON config file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a config entry by dotted path, e.g. `trap.N=12`
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Output file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (task, common) = match cli.command {
        Command::Density(c) => (Task::Density, c),
        Command::Momentum(c) => (Task::Momentum, c),
        Command::Occupations(c) => (Task::Occupations, c),
        Command::Duality(c) => (Task::Duality, c),
        Command::Oracle(c) => (Task::Oracle, c),
        Command::Couplings(c) => (Task::Couplings, c),
        Command::Validate(c) => (Task::Validate, c),
    };
    match run(task, common) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}

fn run(task: Task, common: Common) -> Result<i32, CliError> {
    let mut sets = common.sets;
    // flags are sugar for the matching config paths
    if let Some(out) = &common.out {
        sets.push(format!("output.path={}", serde_json::Value::String(out.display().to_string())));
    }
    if let Some(f) = common.format {
        sets.push(format!("output.format={}", match f {
            FormatArg::Csv => "csv",
            FormatArg::Json => "json",
        }));
    }
    let config = resolve_config(task, common.config.as_deref(), &sets)?;
    execute(&config)
}
