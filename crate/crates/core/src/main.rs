use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dirac_entanglement::cli::{self, RunError};

#[derive(Parser)]
#[command(name = "dirac-entanglement", about = "Entanglement decay scans for lattice Dirac ground states")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a separation scan and write scan.csv and summary.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides output.directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a config and print derived quantities without computing.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Charge-conjugation sign and time-reversal data per spacetime dimension.
    GammaTable {
        /// Comma-separated dimensions, ranges allowed (e.g. 3,4,8-12).
        #[arg(long)]
        dims: String,
        #[arg(long)]
        json: bool,
    },
    Version,
}

fn execute(command: Command) -> Result<String, RunError> {
    match command {
        Command::Run { config, out } => {
            let report = cli::run_path(&config, out.as_deref())?;
            Ok(format!(
                "{} separations, M = {}, predicted_rate = {}",
                report.rows.len(),
                report.effective_mass,
                report.predicted_rate
            ))
        }
        Command::Validate { config } => Ok(cli::validate_path(&config)?.to_string()),
        Command::GammaTable { dims, json } => {
            let rows = cli::gamma_table(&cli::parse_dims(&dims)?)?;
            Ok(if json {
                serde_json::to_string_pretty(&rows).expect("rows serialize")
            } else {
                cli::render_gamma_table(&rows).trim_end().to_string()
            })
        }
        Command::Version => Ok(cli::version()),
    }
}

fn main() -> ExitCode {
    match execute(Args::parse().command) {
        Ok(text) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
