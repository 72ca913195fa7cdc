use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use credence_cli::{
    cmd_confidence, cmd_query, cmd_scenario, cmd_validate, Format, RenderOptions, DEFAULT_MAX_VARIABLES,
    DEFAULT_PRECISION, DEFAULT_WIDTH,
};

/// Exact inference and network-induced confidence for discrete causal networks.
#[derive(Parser)]
#[command(name = "credence", version)]
struct Cli {
    /// Decimal places in printed numbers (1-12)
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: usize,

    /// Histogram bar length for a mass of 1 (at least 10)
    #[arg(long, global = true, default_value_t = DEFAULT_WIDTH)]
    width: usize,

    /// Largest network accepted for enumeration
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_VARIABLES)]
    max_vars: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a network document and print its topological order
    Validate { network: PathBuf },
    /// Posterior over one variable
    Query {
        network: PathBuf,
        #[arg(long)]
        evidence: Option<PathBuf>,
        /// Variable to query
        #[arg(long)]
        target: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Distribution of the belief in VAR=STATE over its contingency set
    Confidence {
        network: PathBuf,
        #[arg(long)]
        evidence: Option<PathBuf>,
        /// Target event as VAR=STATE
        #[arg(long)]
        target: String,
        /// Keep only the k most probable contingency combinations
        #[arg(long)]
        top_k: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Replay a scenario file and print one section per step
    Scenario {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match &cli.command {
        Command::Validate { .. } => Format::Table,
        Command::Query { format, .. }
        | Command::Confidence { format, .. }
        | Command::Scenario { format, .. } => *format,
    };
    let result = RenderOptions::new(format, cli.precision, cli.width).and_then(|opts| match &cli.command {
        Command::Validate { network } => cmd_validate(network, cli.max_vars),
        Command::Query {
            network,
            evidence,
            target,
            ..
        } => cmd_query(network, evidence.as_deref(), target, cli.max_vars, &opts),
        Command::Confidence {
            network,
            evidence,
            target,
            top_k,
            ..
        } => cmd_confidence(network, evidence.as_deref(), target, *top_k, cli.max_vars, &opts),
        Command::Scenario { file, .. } => cmd_scenario(file, cli.max_vars, &opts),
    });
    match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(out.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(credence_cli::exit::IO);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
