//! `cqnls`: build dnoidal standing waves and write verification reports.
//!
//! Exit codes: 0 success, 1 domain or configuration error, 2 a numerical
//! check failed (the report is still written), 64 usage error, 74 I/O error.

mod commands;
mod config;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use config::{Cli, Format, RunArgs, RunConfig};

const EXIT_INPUT: u8 = 1;
const EXIT_CHECK: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_IO: u8 = 74;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let (name, args) = cli.command.parts();
    ExitCode::from(execute(name, args))
}

fn execute(name: &'static str, args: &RunArgs) -> u8 {
    let cfg = match RunConfig::resolve(name, args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("cqnls {name}: {e}");
            return EXIT_INPUT;
        }
    };
    let result = match args.jobs {
        Some(0) => {
            eprintln!("cqnls {name}: --jobs must be at least 1");
            return EXIT_INPUT;
        }
        Some(jobs) => match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(|| commands::run(&cfg)),
            Err(e) => {
                eprintln!("cqnls {name}: cannot start worker pool: {e}");
                return EXIT_IO;
            }
        },
        None => commands::run(&cfg),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("cqnls {name}: {e}");
            return if e.is_input_error() { EXIT_INPUT } else { EXIT_CHECK };
        }
    };
    let text = match cfg.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    };
    let written = match &args.output {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("cqnls {name}: cannot write report: {e}");
        return EXIT_IO;
    }
    let failed: Vec<_> = report.failed_checks().collect();
    for c in &failed {
        eprintln!("cqnls {name}: check failed: {}", c.name);
    }
    if !failed.is_empty() {
        EXIT_CHECK
    } else if report.input_errors > 0 {
        eprintln!("cqnls {name}: {} sample(s) rejected on their inputs", report.input_errors);
        EXIT_INPUT
    } else {
        0
    }
}
