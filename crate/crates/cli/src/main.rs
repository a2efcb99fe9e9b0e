use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use colldyn::{commands, CliError};

#[derive(Parser)]
#[command(name = "colldyn", version, about = "Recurrence experiments on base, hyperspace and fuzzy dynamics")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Run the analyses of a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Overrides the seed of the config.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// List the built-in systems.
    Catalog,
    /// Draw the return-time windows of a report as SVG.
    Plot {
        report: PathBuf,
        #[arg(long, default_value = "windows.svg")]
        out: PathBuf,
    },
    /// Run the acceptance suite.
    Selftest {
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res: Result<i32, CliError> = match cli.verb {
        Verb::Run { config, out, seed, jobs } => {
            commands::run(&config, &out, seed, jobs).map(|(files, code)| {
                eprintln!("report written to {}", files.report.display());
                code
            })
        }
        Verb::Catalog => {
            print!("{}", commands::catalog());
            Ok(0)
        }
        Verb::Plot { report, out } => commands::plot(&report, &out).map(|()| 0),
        Verb::Selftest { out, seed, jobs } => {
            commands::selftest(&out, seed, jobs).map(|(path, _, code)| {
                eprintln!("report written to {}", path.display());
                code
            })
        }
    };
    match res {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
