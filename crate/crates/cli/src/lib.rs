//! Command-line front-end for `fracwave-core`: configuration, parallel
//! drivers and report files.

pub mod commands;
pub mod config;
pub mod error;
pub mod measure;
pub mod report;

use clap::Parser;

pub use commands::{run, Command};
pub use config::{Overrides, RunConfig};
pub use error::{CliError, Result};
pub use report::Report;

#[derive(Debug, Parser)]
#[command(name = "fracwave", version, about = "Variance, bounds and exact sampling for fractional-noise wave and heat equations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

/// Parses, runs and writes; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::error::ErrorKind;
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return 0;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("{}", first.trim());
            return 2;
        }
    };
    match execute(&cli) {
        Ok(holds) => u8::from(!holds),
        Err(e) => {
            eprintln!("error: {}", e.to_string().replace('\n', " "));
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<bool> {
    let config = cli.overrides.merge()?;
    let report = run(cli.command, &config)?;
    match &config.output_dir {
        Some(dir) => {
            for path in report.write(dir)? {
                println!("wrote {}", path.display());
            }
            println!("{}: {}", report.command, if report.outcome.holds { "holds" } else { "FAILED" });
        }
        None => println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("report serializes")),
    }
    Ok(report.outcome.holds)
}
