use std::path::PathBuf;
use std::process::ExitCode;

use besicover::experiment::{self, Command, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION};
use besicover::geometry::set_point_cap;
use clap::{Parser, ValueEnum};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Sub {
    Cover,
    Concentration,
    Ratio,
    Maximal,
}

impl From<Sub> for Command {
    fn from(s: Sub) -> Self {
        match s {
            Sub::Cover => Command::Cover,
            Sub::Concentration => Command::Concentration,
            Sub::Ratio => Command::Ratio,
            Sub::Maximal => Command::Maximal,
        }
    }
}

/// Exact covering, concentration and ratio-average experiments.
#[derive(Debug, Parser)]
#[command(name = "besicover", version)]
struct Cli {
    #[arg(value_enum)]
    command: Sub,
    /// JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Output file (CSV, or JSON for `maximal`).
    #[arg(long)]
    out: PathBuf,
    /// Overrides the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; defaults to one per core.
    #[arg(long)]
    threads: Option<usize>,
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return code(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    if let Ok(v) = std::env::var("BESICOVER_CAP") {
        match v.trim().parse::<u64>() {
            Ok(cap) if cap > 0 => set_point_cap(cap),
            _ => {
                eprintln!("besicover: BESICOVER_CAP must be a positive integer, got {v:?}");
                return code(EXIT_USAGE);
            }
        }
    }
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("besicover: --threads must be positive");
            return code(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("besicover: {e}");
            return code(EXIT_USAGE);
        }
    }
    let config = match std::fs::read_to_string(&cli.config) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("besicover: cannot read {}: {e}", cli.config.display());
            return code(EXIT_USAGE);
        }
    };
    let command: Command = cli.command.into();
    let outcome = match experiment::run(command, &config, cli.seed) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("besicover {}: {e}", command.name());
            return code(experiment::exit_code(&e));
        }
    };
    if let Err(e) = std::fs::write(&cli.out, &outcome.bytes) {
        eprintln!("besicover: cannot write {}: {e}", cli.out.display());
        return code(experiment::EXIT_IO);
    }
    if outcome.findings.is_empty() {
        return code(EXIT_OK);
    }
    for f in &outcome.findings {
        eprintln!("besicover {}: violation: {f}", command.name());
    }
    code(EXIT_VIOLATION)
}
