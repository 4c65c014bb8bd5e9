//! The `phtk` command-line harness.
//!
//! Every subcommand writes into `--out-dir` and echoes its full resolved
//! configuration into each output: a `"config"` member in JSON, a
//! `# config: {...}` line in CSV and a comment in SVG. Exit codes are 0 on
//! success, 1 for configuration errors, 2 for I/O or malformed input files
//! and 3 for numerical failures.

pub mod args;
mod commands;
mod experiments;
mod output;
pub mod svg;

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::Parser;
use phtk::Error;

pub use args::Cli;
pub use experiments::{exp1_report, exp2_report, Exp1Report, Exp2Report};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Io(m) => write!(f, "input/output error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Io { .. } | Error::Idx(_) | Error::Parse { .. } | Error::DiagramFormat(_) => {
                CliError::Io(msg)
            }
            Error::SamplingFailed { .. } | Error::Diverged { .. } => CliError::Numerical(msg),
            Error::InvalidCloud(_)
            | Error::InvalidArgument(_)
            | Error::DimensionMismatch(..)
            | Error::EssentialWithoutCap => CliError::Config(msg),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match with_config_file(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("phtk: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match commands::dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("phtk: {e}");
            e.exit_code()
        }
    }
}

fn config_path(argv: &[OsString]) -> Option<PathBuf> {
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--" {
            break;
        }
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

/// Parses a `key = value` file into flag arguments. `#` starts a comment;
/// `true`/`false` toggle switches.
pub fn parse_config_file(text: &str) -> CliResult<Vec<OsString>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Config(format!("config line {}: expected key = value", i + 1)));
        };
        let (key, value) = (key.trim().replace('_', "-"), value.trim());
        if key.is_empty() || key == "config" {
            return Err(CliError::Config(format!("config line {}: bad key {key:?}", i + 1)));
        }
        match value {
            "true" => out.push(format!("--{key}").into()),
            "false" => {}
            _ => {
                out.push(format!("--{key}").into());
                out.push(value.into());
            }
        }
    }
    Ok(out)
}

/// Inserts the config-file flags right after the subcommand name, so that
/// flags given on the command line come later and override them.
fn with_config_file(argv: Vec<OsString>) -> CliResult<Vec<OsString>> {
    let Some(path) = config_path(&argv) else { return Ok(argv) };
    let text = read_text(&path)?;
    let injected = parse_config_file(&text)?;
    let names = ["gen", "ingest", "persist", "distance", "lifetimes", "optimize", "exp1", "exp2"];
    let at = argv
        .iter()
        .skip(1)
        .position(|a| names.contains(&a.to_string_lossy().as_ref()))
        .map_or(argv.len(), |p| p + 2);
    let mut out = argv[..at].to_vec();
    out.extend(injected);
    out.extend_from_slice(&argv[at..]);
    Ok(out)
}

fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
