//! `lctc`: command-line front end to the library.
//!
//! Exit codes: 0 success, 1 a criterion failed, 2 configuration error,
//! 3 numerical non-convergence.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use lctc::config::RunConfig;
use lctc::report::{run, Command, Outcome};
use lctc::Error;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Gap,
    Criteria,
    Nreq,
    Sweep,
    Table2,
    Simulate,
    Multiparty,
    Cqed,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "lctc", version, about = "Latency-constrained task coordination with nonlocal games")]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `simulation.seed`.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::InvalidArgument(_) | Error::Parameter(_) => 2,
        Error::NonConvergence(_) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = (|| {
        let mut cfg = RunConfig::load(&args.config)?;
        if let Some(seed) = args.seed {
            cfg.simulation.seed = seed;
        }
        let cmd = match args.command {
            Cmd::Gap => Command::Gap,
            Cmd::Criteria => Command::Criteria,
            Cmd::Nreq => Command::Nreq,
            Cmd::Sweep => Command::Sweep,
            Cmd::Table2 => Command::Table2,
            Cmd::Simulate => Command::Simulate,
            Cmd::Multiparty => Command::Multiparty,
            Cmd::Cqed => Command::Cqed,
        };
        let report = run(cmd, &cfg)?;
        let text = match args.format {
            Format::Json => report.to_json(),
            Format::Csv => report.to_csv(),
        };
        match &args.out {
            Some(p) => std::fs::write(p, text).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?,
            None => match std::io::stdout().write_all(text.as_bytes()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    return Err(Error::Config(format!("stdout: {e}")));
                }
                _ => {}
            },
        }
        Ok::<_, Error>(report.outcome)
    })();
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::CriteriaFail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("lctc: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
