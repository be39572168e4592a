use std::process::ExitCode;

use clap::{Parser, Subcommand};
use visector_cli::{cmd_antenna, cmd_map, cmd_run, AntennaArgs, MapArgs, RunArgs};

/// Virtual-sector downlink simulator.
#[derive(Debug, Parser)]
#[command(name = "visector", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the array pattern and check the side-lobe constraint.
    Antenna(AntennaArgs),
    /// Write the serving-cell map.
    Map(MapArgs),
    /// Simulate the traffic profile in each requested mode.
    Run(RunArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Antenna(a) => cmd_antenna(a),
        Command::Map(a) => cmd_map(a),
        Command::Run(a) => cmd_run(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
