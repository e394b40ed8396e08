use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use geomech::cli::{parse_config_with_overrides, run, systems_listing, ExitStatus};

#[derive(Parser)]
#[command(name = "geomech", version, about = "Structure-preserving simulation of mechanical systems")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configuration file, optionally overriding keys.
    Run {
        config: Option<PathBuf>,
        /// `key=value`, applied after the file; may be repeated.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// List the built-in systems and their parameters.
    Systems,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match args.command {
        Command::Systems => {
            print!("{}", systems_listing());
            ExitCode::SUCCESS
        }
        Command::Run { config, set } => {
            let text = match &config {
                Some(path) => match std::fs::read_to_string(path) {
                    Ok(t) => t,
                    Err(e) => {
                        eprintln!("error: cannot read {}: {e}", path.display());
                        return ExitCode::from(ExitStatus::Error.code() as u8);
                    }
                },
                None => String::new(),
            };
            let result = parse_config_with_overrides(&text, &set).and_then(|c| run(&c).map(|r| (c, r)));
            match result {
                Ok((c, (status, report))) => {
                    print!("{report}");
                    eprintln!("wrote {} and {}", c.output_path, c.report_path().display());
                    ExitCode::from(status.code() as u8)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(ExitStatus::Error.code() as u8)
                }
            }
        }
    }
}
