mod args;
mod cache;
mod commands;
mod output;

use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;
use output::{checksum, emit, RunManifest, TowerInfo};

pub const EXIT_OTHER: u8 = 1;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_VERIFY: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

/// Bad input detected by the CLI itself (grid syntax, cutoff lists, ...).
#[derive(Debug)]
pub struct Validation(pub String);

impl std::fmt::Display for Validation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for Validation {}

fn exit_code(e: &anyhow::Error) -> u8 {
    if let Some(err) = e.downcast_ref::<cubicl::Error>() {
        return if err.is_validation() { EXIT_VALIDATION } else { EXIT_OTHER };
    }
    if e.downcast_ref::<Validation>().is_some() {
        return EXIT_VALIDATION;
    }
    EXIT_OTHER
}

fn run(cli: Cli, argv: Vec<String>) -> anyhow::Result<u8> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let start = Instant::now();
    let outcome = commands::dispatch(&cli)?;
    let runtime_ms = start.elapsed().as_millis() as u64;
    let manifest = RunManifest {
        tool_version: output::tool_version(),
        tower: TowerInfo::of(&outcome.tower),
        command_line: argv,
        threads: rayon::current_num_threads(),
        cutoffs: outcome.cutoffs,
        family_cache: outcome.cache,
        runtime_ms,
        output_sha256: checksum(&outcome.rendered),
    };
    emit(cli.out.as_deref(), &outcome.rendered, &manifest)?;
    if let Some(msg) = outcome.failure {
        eprintln!("verification failed: {msg}");
        return Ok(EXIT_VERIFY);
    }
    Ok(0)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(cli, argv) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
