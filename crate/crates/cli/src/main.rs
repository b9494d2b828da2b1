//! `jacobi-lab`: run the spectral pipelines of `jacobi-spectra` on operator
//! configs and write JSON or CSV reports.
//!
//! Exit status: 0 on success, 1 when a checked inequality is violated,
//! 2 on malformed input.

mod config;
mod error;
mod output;
mod pipeline;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use jacobi_spectra::inequality::DEFAULT_EPSILONS;

use config::{parse_epsilon, Command, ComplexArg, Format, GridArg, RunConfig};
use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "jacobi-lab",
    version,
    about = "Spectral experiments for finitely supported Jacobi operators"
)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Operator JSON, or a family file `{"families": [...]}` for `sweep`.
    #[arg(long)]
    config: PathBuf,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, value_delimiter = ',', value_parser = parse_epsilon)]
    epsilon: Vec<f64>,
    /// Polar grid `NR,NT,RMIN,RMAX` for `det-scan` and `oracle-compare`.
    #[arg(long, default_value_t = GridArg::default())]
    grid: GridArg,
    /// Finite-section half width N (matrix size 2N+1).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    section_n: Option<u64>,
    /// Seed for random families in `sweep`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Spectral parameter `RE,IM` for `jost`.
    #[arg(long, default_value = "0.5,0")]
    z: ComplexArg,
}

impl Cli {
    fn into_config(self) -> RunConfig {
        RunConfig {
            command: self.command,
            config_path: self.config,
            grid: self.grid,
            epsilons: if self.epsilon.is_empty() {
                DEFAULT_EPSILONS.to_vec()
            } else {
                self.epsilon
            },
            section_n: self.section_n.map(|n| n as usize),
            seed: self.seed,
            z: self.z.0,
            out: self.out,
            format: self.format,
        }
    }
}

fn execute(cfg: &RunConfig) -> Result<Vec<String>, CliError> {
    let report = pipeline::run(cfg)?;
    let bytes = match cfg.format {
        Format::Json => output::to_json(&report)?,
        Format::Csv => report.table().to_csv()?,
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    Ok(report.violations)
}

fn main() -> ExitCode {
    let cfg = Cli::parse().into_config();
    match execute(&cfg) {
        Ok(violations) if violations.is_empty() => ExitCode::SUCCESS,
        Ok(violations) => {
            for v in &violations {
                eprintln!("violation: {v}");
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
