//! `singcurve`: reports on monomial curves, point configurations and the
//! generic classification table.
//!
//! Exit status: 0 success, 1 internal failure, 2 usage, 3 semigroup input,
//! 4 configuration input.

mod error;
mod pointset_cmd;
mod semigroup_cmd;
mod table_cmd;

use std::io::Write;
use std::panic;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "singcurve", version, about = "Smoothability invariants of curve singularities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Invariants, Dedekind table and gap sumset verdict of a numerical semigroup
    Semigroup(semigroup_cmd::SemigroupArgs),
    /// Position checks, Gale transform and graded T1 of a point configuration
    Pointset(pointset_cmd::PointsetArgs),
    /// Generic non-smoothability table for cones over general points
    Table(table_cmd::TableArgs),
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes") + "\n"
}

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Semigroup(args) => {
            let r = semigroup_cmd::report(args)?;
            Ok(if args.json { to_json(&r) } else { semigroup_cmd::render_text(&r) })
        }
        Command::Pointset(args) => {
            let r = pointset_cmd::report(args)?;
            Ok(if args.json { to_json(&r) } else { pointset_cmd::render_text(&r) })
        }
        Command::Table(args) => {
            let r = table_cmd::report(args)?;
            Ok(table_cmd::render(&r, args.format))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match panic::catch_unwind(|| run(&cli)) {
        Ok(Ok(out)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|()| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Ok(Err(e)) => {
            eprintln!("singcurve: {e}");
            ExitCode::from(e.exit_code())
        }
        Err(_) => ExitCode::from(1),
    }
}
