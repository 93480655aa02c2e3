//! Command-line front end: `cqnc <psd|power-sweep|check|roots> --config FILE`.
//!
//! Exit status is 0 on success, 1 when `check` finds a failing check and 2
//! on any usage or configuration error. Output files are only created once
//! the command has produced its table.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{cmd_check, cmd_power_sweep, cmd_psd, cmd_roots, Outcome};
pub use config::{ConfigError, Format, GridSpec, RunConfig};
pub use output::{Cell, Table};

#[derive(Debug, Parser)]
#[command(
    name = "cqnc",
    version,
    about = "Added-noise spectra for hybrid optomechanical force sensing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Force-noise PSD versus frequency for every model.
    Psd(CommonArgs),
    /// PSD at a fixed frequency versus laser power.
    PowerSweep(CommonArgs),
    /// Consistency checks; exits 1 if any fails.
    Check(CommonArgs),
    /// Roots of the unit-gain constraint.
    Roots(CommonArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv|json (overrides the config).
    #[arg(long)]
    format: Option<String>,
    /// literal|consistent (overrides the config).
    #[arg(long)]
    mode: Option<String>,
    /// Include thermal force noise (overrides the config).
    #[arg(long)]
    thermal: Option<OnOff>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OnOff {
    On,
    Off,
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (command, common) = match &cli.command {
        Command::Psd(a) => (commands::cmd_psd as fn(&RunConfig) -> _, a),
        Command::PowerSweep(a) => (commands::cmd_power_sweep as fn(&RunConfig) -> _, a),
        Command::Check(a) => (commands::cmd_check as fn(&RunConfig) -> _, a),
        Command::Roots(a) => (commands::cmd_roots as fn(&RunConfig) -> _, a),
    };
    match execute(command, common) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn execute(
    command: fn(&RunConfig) -> Result<Outcome, ConfigError>,
    args: &CommonArgs,
) -> Result<i32, RunError> {
    let mut cfg = RunConfig::load(&args.config)?;
    if let Some(f) = &args.format {
        cfg.format = config::parse_format(Some(f))?;
    }
    if let Some(m) = &args.mode {
        cfg.mode = config::parse_mode(Some(m))?;
    }
    if let Some(t) = args.thermal {
        cfg.thermal = matches!(t, OnOff::On);
    }

    let outcome = command(&cfg)?;
    for d in &outcome.diagnostics {
        eprintln!("warning: {d}");
    }
    let text = outcome.table.render(cfg.format);
    match &args.out {
        Some(path) => std::fs::write(path, text).map_err(|source| RunError::Write {
            path: path.clone(),
            source,
        })?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| RunError::Write {
                    path: PathBuf::from("<stdout>"),
                    source,
                })?;
        }
    }
    Ok(outcome.exit_code)
}
