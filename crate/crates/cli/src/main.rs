//! `quasiq <task> [example] --spec <file> [--dim n] [--preset name] [--seed k]
//! [--format json|text] [--x expr --y expr] [--epsilon 0|1]`
//!
//! Exit status: 0 when every condition passes, 1 on a verification failure,
//! 2 on an input or parse error.

mod doc;
mod report;
mod tasks;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use quasiq::Error;

use crate::doc::SpecDocument;
use crate::tasks::{Example, Params, Task};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "quasiq", version, about = "Verify and convert odd Jacobi and quasi Q structures")]
struct Cli {
    task: Task,
    /// Built-in structure for the `example` task.
    example: Option<Example>,
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    dim: Option<usize>,
    /// Lie algebra preset for `example lie-algebra`.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    y: Option<String>,
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
    epsilon: Option<u8>,
}

fn load(path: &PathBuf) -> Result<SpecDocument, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("invalid spec document {}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let doc = match cli.spec.as_ref().map(load).transpose() {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let params = Params {
        example: cli.example,
        dim: cli.dim,
        preset: cli.preset,
        seed: cli.seed,
        x: cli.x,
        y: cli.y,
        epsilon: cli.epsilon,
    };
    let start = Instant::now();
    let mut report = match tasks::run(cli.task, doc.as_ref(), &params) {
        Ok(r) => r,
        Err(Error::StructureInvalid(msg)) => {
            let mut r = report::Report::new(&tasks::name(cli.task));
            r.fail(msg);
            r
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    report.timing_ms = start.elapsed().as_secs_f64() * 1e3;
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize")),
        Format::Text => print!("{}", report.text()),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
