use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Command, Common};
use crate::{CliError, CliResult};

/// The resolved run configuration echoed into every output file.
pub fn run_config<T: Serialize>(command: &Command, common: &Common, args: &T) -> Value {
    json!({
        "command": command.name(),
        "common": common,
        "args": args,
        "version": env!("CARGO_PKG_VERSION"),
    })
}

pub fn config_line(config: &Value) -> String {
    format!("config: {config}")
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))
}

/// Writes a batch of files, creating their directories first. Nothing is
/// written until every file's contents are ready.
pub fn write_all(files: &[(PathBuf, String)]) -> CliResult<()> {
    for (path, text) in files {
        if let Some(parent) = path.parent() {
            ensure_dir(parent)?;
        }
        std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain JSON");
    s.push('\n');
    s
}

/// CSV text: a `# config` line, a header, then rows.
pub fn csv_text(config: &Value, header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = format!("# {}\n{}\n", config_line(config), header.join(","));
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

/// Shortest round-trip representation.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}
