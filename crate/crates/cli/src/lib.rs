//! Command-line workflows: estimate, simulate, fit, plan and table.
//!
//! Every artifact embeds the resolved configuration, the seed (if any), the
//! tool version and a provenance tag for each constant. Exit codes are 0 on
//! success, 1 on domain errors (for example an above-threshold error rate)
//! and 2 on usage or configuration errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use qec_blueprint::{Error, Result};

pub mod config;
pub mod estimate;
pub mod fit;
pub mod plan;
pub mod report;
pub mod simulate;
pub mod table;

#[derive(Debug, Parser)]
#[command(name = "qec-blueprint", version, about = "Surface-code resource estimates and hardware blueprints")]
pub struct Cli {
    /// Suppress progress messages on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Physical resources needed for a target logical error rate.
    Estimate(estimate::EstimateCmd),
    /// Monte Carlo sweep of logical error rates, written as CSV.
    Simulate(simulate::SimulateCmd),
    /// Fit the scaling law and locate the threshold from a sweep CSV.
    Fit(fit::FitCmd),
    /// Bill of materials for one hardware platform.
    #[command(subcommand)]
    Plan(plan::PlanCmd),
    /// Machine cost table over qubit counts and prices per qubit.
    Table(table::TableCmd),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// Options shared by the report-producing commands.
#[derive(Debug, Clone, Default, Args)]
pub struct ReportOpts {
    /// JSON config file; explicit flags take precedence over its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Also write the JSON report to this file.
    #[arg(long)]
    pub json_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

impl ReportOpts {
    /// Writes the report in the chosen format, plus the JSON copy if requested.
    pub fn emit(&self, json: &str, out: &mut dyn Write) -> Result<()> {
        if let Some(path) = &self.json_out {
            write_file(path, json)?;
        }
        match self.format {
            Format::Json => out.write_all(json.as_bytes())?,
            Format::Text => {
                let value: serde_json::Value = serde_json::from_str(json)?;
                out.write_all(report::render_text(&value).as_bytes())?;
            }
        }
        Ok(())
    }
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

pub(crate) fn require<T>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| Error::Config(format!("missing required setting '{name}'")))
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Estimate(cmd) => estimate::run(cmd, out),
        Command::Simulate(cmd) => simulate::run(cmd, out),
        Command::Fit(cmd) => fit::run(cmd, out),
        Command::Plan(cmd) => plan::run(cmd, out),
        Command::Table(cmd) => table::run(cmd, out),
    }
}

pub fn exit_code(err: &Error) -> u8 {
    if err.is_usage() {
        2
    } else {
        1
    }
}

/// Parses `args` and runs the command, returning stdout and the exit code.
/// Argument errors yield code 2 with clap's message as output.
pub fn run_captured<I, T>(args: I) -> (String, u8)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => return (e.to_string(), e.exit_code() as u8),
    };
    let mut buf = Vec::new();
    match execute(&cli, &mut buf) {
        Ok(()) => (String::from_utf8_lossy(&buf).into_owned(), 0),
        Err(e) => (format!("error: {e}"), exit_code(&e)),
    }
}
