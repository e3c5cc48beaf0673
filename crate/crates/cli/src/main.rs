use std::path::PathBuf;
use std::process::ExitCode;

use cepalg_cli::{load_scenario, run_scenario, Overrides};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cepalg", version, about = "Classify nets of smooth functions over asymptotic scales")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task of a scenario file.
    Run {
        scenario: PathBuf,
        /// Frontier degree D.
        #[arg(long)]
        degree: Option<u32>,
        /// Grid points per axis.
        #[arg(long)]
        grid: Option<usize>,
        /// Number of schedule points that stand for "eventually".
        #[arg(long)]
        tail: Option<usize>,
        /// Directory for CSV series.
        #[arg(long)]
        csv_dir: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let Command::Run {
        scenario,
        degree,
        grid,
        tail,
        csv_dir,
    } = Cli::parse().command;
    let overrides = Overrides {
        degree,
        grid,
        tail,
        csv_dir,
    };
    let loaded = load_scenario(&scenario).and_then(|mut s| s.apply(&overrides).map(|()| s));
    let s = match loaded {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {e}", scenario.display());
            return ExitCode::from(1);
        }
    };
    let report = run_scenario(&s);
    print!("{}", report.render());
    ExitCode::from(report.exit_code() as u8)
}
