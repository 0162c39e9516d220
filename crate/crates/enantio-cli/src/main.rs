use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use enantio_cli::app::{execute, Job};
use enantio_cli::error::{CliError, ValidationReport};
use enantio_cli::kinds::Kind;

/// Exceptional-point experiments for chiral molecules and twisted fibers.
#[derive(Parser, Debug)]
#[command(name = "enantio-ep", version)]
struct Args {
    /// Experiment kind.
    #[arg(value_enum)]
    kind: Kind,
    /// TOML spec file.
    #[arg(long)]
    spec: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
    /// Worker threads for sweeps.
    #[arg(long, env = "ENANTIO_EP_WORKERS")]
    workers: Option<usize>,
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return fail(&CliError::Validation(ValidationReport::invalid("arguments", e.kind().to_string())));
        }
    };
    let job = Job { kind: args.kind, spec: args.spec, out: args.out, workers: args.workers };
    match execute(&job) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
