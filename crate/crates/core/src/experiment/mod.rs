//! Config-driven runners behind the `besicover` binary. Each runner parses a
//! JSON config, computes exactly, and renders CSV or JSON bytes. A run that
//! completes but falsifies a checked inequality returns its bytes together
//! with a list of findings.

mod concentration;
mod cover;
mod maximal;
mod ratio;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{self, Rational};

pub use concentration::{run_concentration, ConcentrationConfig};
pub use cover::{run_cover, CoverConfig, CoverRun};
pub use maximal::{run_maximal, MaximalConfig};
pub use ratio::{run_ratio, RatioConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Cover,
    Concentration,
    Ratio,
    Maximal,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Cover => "cover",
            Command::Concentration => "concentration",
            Command::Ratio => "ratio",
            Command::Maximal => "maximal",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub bytes: Vec<u8>,
    /// Invariant or certificate violations found during the run.
    pub findings: Vec<String>,
}

/// Runs `command` on the JSON `config`. `seed` overrides the config's seed.
pub fn run(command: Command, config: &str, seed: Option<u64>) -> Result<Outcome> {
    match command {
        Command::Cover => run_cover(&serde_json::from_str(config)?, seed),
        Command::Concentration => run_concentration(&serde_json::from_str(config)?, seed),
        Command::Ratio => run_ratio(&serde_json::from_str(config)?),
        Command::Maximal => run_maximal(&serde_json::from_str(config)?, seed),
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

/// Process exit status for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::CertificateViolation { .. } | Error::ExhaustionOverrun { .. } | Error::HypothesisViolation(_) => {
            EXIT_VIOLATION
        }
        Error::Io(_) => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

fn float_cell(r: &Rational) -> String {
    format!("{:e}", exact::to_f64(r))
}

fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn json_bytes<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(v)?;
    out.push(b'\n');
    Ok(out)
}

fn default_seed() -> u64 {
    0
}
