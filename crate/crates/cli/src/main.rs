use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use ampgen_cli::config::SweepSpec;
use ampgen_cli::verify::{self, VerifyOptions};
use ampgen_cli::{crossover, sweep};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "ampgen", version, about = "Single-transistor amplifier formulas, checked")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sweep one load and write closed form, solver and variant columns as CSV.
    Sweep {
        /// Configuration file (`key = value` lines).
        config: PathBuf,
    },
    /// Run every acceptance check and print one JSON record per line.
    Verify {
        /// Write the JSON lines here instead of standard output.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = VerifyOptions::default().seed)]
        seed: u64,
    },
    /// Common-source approximation crossovers.
    Crossover {
        #[command(subcommand)]
        which: Study,
    },
}

#[derive(Subcommand)]
enum Study {
    /// Drain load swept from 10 ohm to 1 Mohm.
    Fig1 {
        /// Also write the swept table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<(), ExitCode> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", p.display());
            ExitCode::from(2)
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, ExitCode> {
    match cli.cmd {
        Cmd::Sweep { config } => {
            let text = fs::read_to_string(&config).map_err(|e| {
                eprintln!("error: cannot read {}: {e}", config.display());
                ExitCode::from(2)
            })?;
            let spec: SweepSpec = text.parse().map_err(|e| {
                eprintln!("error: {}: {e}", config.display());
                ExitCode::from(2)
            })?;
            let out = sweep::run_sweep(&spec);
            if out.nan_cells > 0 {
                eprintln!("warning: {} cells have no value and are written as nan", out.nan_cells);
            }
            write_out(spec.output.as_ref(), &out.to_csv())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { report, seed } => {
            let opts = VerifyOptions {
                seed,
                ..VerifyOptions::default()
            };
            let rep = verify::run(&opts);
            for c in rep.failures() {
                eprintln!("{c}");
            }
            write_out(report.as_ref(), &rep.to_jsonl())?;
            let failed = rep.failures().count();
            eprintln!("{} checks, {failed} failed", rep.checks.len());
            Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Crossover {
            which: Study::Fig1 { csv },
        } => {
            let rep = crossover::fig1(241);
            println!("{rep}");
            if let Some(p) = csv {
                write_out(Some(&p), &rep.to_csv())?;
            }
            Ok(if rep.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    run(cli).unwrap_or_else(|code| code)
}
