//! Batch front end: reads a JSON run configuration, sweeps the incident
//! frequency through the classical, quantum or discretized-particle pipeline
//! and writes a CSV table.
//!
//! Exit codes: 0 when at least one row succeeded, 1 when every row failed,
//! 2 when the configuration is invalid.

// Negated comparisons are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod output;
pub mod run;

use std::path::PathBuf;

pub use config::{prepare, validate, Diagnostic, Mode, Prepared, RunConfig};
pub use output::{Output, SelfEnergyRow, SpectrumRow, FIELD_HEADER, SELF_ENERGY_HEADER, SPECTRUM_HEADER};
pub use run::run;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ALL_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Classical,
    QuantumRpa,
    QuantumDda,
    SelfEnergy,
    DdaSolve,
    Validate,
}

impl Command {
    fn mode(self) -> Option<Mode> {
        match self {
            Command::Classical => Some(Mode::Classical),
            Command::QuantumRpa => Some(Mode::QuantumRpa),
            Command::QuantumDda => Some(Mode::QuantumDda),
            Command::SelfEnergy => Some(Mode::SelfEnergy),
            Command::DdaSolve => Some(Mode::DdaSolve),
            Command::Validate => None,
        }
    }
}

#[derive(Debug, Clone, clap::Parser)]
#[command(name = "sers-kit", version, about = "SERS frequency sweeps from a JSON configuration")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    #[arg(long)]
    pub config: PathBuf,
    /// Output CSV; overrides the config's `output`. Without either, CSV goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for the sweep (default: available parallelism).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Broadening η; overrides `numeric.eta`.
    #[arg(long)]
    pub eta: Option<f64>,
}

/// Runs one command and returns the process exit code. Diagnostics go to
/// stderr, validation reports and CSV without an output path to stdout.
pub fn execute(cli: &Cli) -> i32 {
    let mut config = match RunConfig::load(&cli.config) {
        Ok(c) => c,
        Err(d) => {
            report(cli.command, &[d]);
            return EXIT_INVALID;
        }
    };
    if let Some(eta) = cli.eta {
        config.numeric.eta = eta;
    }
    let mut diags = Vec::new();
    if cli.threads == Some(0) {
        diags.push(Diagnostic { location: "--threads".into(), message: "must be at least 1".into() });
    }
    let prepared = match prepare(&config, cli.command.mode()) {
        Ok(p) if diags.is_empty() => p,
        Ok(_) => {
            report(cli.command, &diags);
            return EXIT_INVALID;
        }
        Err(mut d) => {
            diags.append(&mut d);
            report(cli.command, &diags);
            return EXIT_INVALID;
        }
    };
    if cli.command == Command::Validate {
        return EXIT_OK;
    }

    let output = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run(&prepared)),
            Err(e) => {
                eprintln!("cannot start {n} worker threads: {e}");
                return EXIT_INVALID;
            }
        },
        None => run(&prepared),
    };

    let csv = output.to_csv();
    match cli.out.as_ref().or(config.output.as_ref()) {
        Some(path) => {
            if let Err(e) = output::write_atomic(path, &csv) {
                eprintln!("cannot write {}: {e}", path.display());
                return EXIT_ALL_FAILED;
            }
        }
        None => print!("{csv}"),
    }
    if output.n_ok() == 0 {
        eprintln!("all {} rows failed", output.n_rows());
        EXIT_ALL_FAILED
    } else {
        EXIT_OK
    }
}

fn report(command: Command, diags: &[Diagnostic]) {
    for d in diags {
        if command == Command::Validate {
            println!("{d}");
        } else {
            eprintln!("{d}");
        }
    }
}
