use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::{commands, exit};

#[derive(Debug, Parser)]
#[command(name = "gmde", version, about = "Check, weave and adapt software architecture models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derive the behavior of an architecture and check its declared properties
    Check(CheckArgs),
    /// Weave a pattern into an architecture
    Weave(WeaveArgs),
    /// Bind an abstract architecture to a platform profile
    Adapt(AdaptArgs),
    /// Write the architecture as a Graphviz digraph
    ExportDot(DotArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Architecture file (.garch)
    pub model: PathBuf,
    /// Abort once the state space grows past this many states
    #[arg(long, env = "GMDE_MAX_STATES", value_parser = clap::value_parser!(u64).range(1..))]
    pub max_states: Option<u64>,
    /// Print the report as JSON
    #[arg(long)]
    pub json: bool,
    /// Also write the derived LTS in Aldebaran format
    #[arg(long, value_name = "FILE")]
    pub aut: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WeaveArgs {
    /// Architecture file (.garch)
    pub model: PathBuf,
    /// Pattern file (.gpat)
    pub pattern: PathBuf,
    /// Print the action list without writing anything
    #[arg(long)]
    pub dry_run: bool,
    /// Directory for the stage files and trace.json
    #[arg(long, value_name = "DIR", required_unless_present = "dry_run")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AdaptArgs {
    /// Architecture file (.garch)
    pub model: PathBuf,
    /// Platform profile (.gplat)
    pub profile: PathBuf,
    /// Print the action list without writing anything
    #[arg(long)]
    pub dry_run: bool,
    /// Directory for the stage files, trace.json and deployment.json
    #[arg(long, value_name = "DIR", required_unless_present = "dry_run")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DotArgs {
    /// Architecture file (.garch)
    pub model: PathBuf,
    /// Write to this file instead of stdout
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

/// Runs one command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let _ = write!(err, "{e}");
            return exit::USAGE;
        }
        Err(e) => {
            let _ = write!(out, "{e}");
            return exit::OK;
        }
    };
    let result = match &cli.command {
        Command::Check(a) => commands::cmd_check(a, out, err),
        Command::Weave(a) => commands::cmd_weave(a, out),
        Command::Adapt(a) => commands::cmd_adapt(a, out),
        Command::ExportDot(a) => commands::cmd_export_dot(a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
