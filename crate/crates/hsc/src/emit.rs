//! Deterministic artifact rendering and atomic writes.
//!
//! Every floating value is printed with 17 significant digits, which is
//! exactly enough to reproduce the underlying bits on re-parse. JSON
//! objects are emitted with sorted keys, so an artifact parsed and
//! re-emitted comes back byte for byte, and two runs of the same scenario
//! under the same binary produce identical files.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;

use crate::failure::{CliResult, Failure};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// One CSV cell; integers print bare, floats with full precision.
#[derive(Debug, Clone)]
pub enum Cell {
    Int(i64),
    Float(f64),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => fmt17(*v),
        }
    }
}

/// A CSV artifact: scalar notes become `#`-prefixed lines between the
/// provenance header and the column row.
#[derive(Debug, Clone, Default)]
pub struct CsvDoc {
    pub notes: Vec<(&'static str, Cell)>,
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
}

/// What a command produced, before provenance is attached.
#[derive(Debug)]
pub enum Body {
    Json(Value),
    Csv(CsvDoc),
}

/// 17 significant digits, normalized exponent form.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

struct SigDigits;

impl Formatter for SigDigits {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{:.16e}", value as f64)
    }
}

/// Renders any serializable value as one line of JSON with sorted keys
/// and full-precision floats.
pub fn json_line(value: &impl Serialize) -> CliResult<String> {
    // Passing through Value sorts object keys; non-finite floats become
    // null rather than failing the whole artifact.
    let canonical = serde_json::to_value(value)?;
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigits);
    canonical.serialize(&mut ser)?;
    String::from_utf8(buf).map_err(|e| Failure::io(e.to_string()))
}

/// Attaches the provenance envelope and renders the final artifact text.
pub fn render(command: &str, parameters: &Value, body: &Body) -> CliResult<String> {
    match body {
        Body::Json(report) => {
            let artifact = serde_json::json!({
                "provenance": {
                    "command": command,
                    "parameters": parameters,
                    "version": VERSION,
                },
                "report": report,
            });
            Ok(format!("{}\n", json_line(&artifact)?))
        }
        Body::Csv(doc) => {
            let mut text = format!(
                "# hsc {command} version={VERSION} parameters={}\n",
                json_line(parameters)?
            );
            for (key, value) in &doc.notes {
                text.push_str(&format!("# {key}={}\n", value.render()));
            }
            text.push_str(&doc.columns.join(","));
            text.push('\n');
            for row in &doc.rows {
                let cells: Vec<String> = row.iter().map(Cell::render).collect();
                text.push_str(&cells.join(","));
                text.push('\n');
            }
            Ok(text)
        }
    }
}

/// Writes the artifact to `out`, or to stdout when no path is given.
/// File writes go through a sibling temp file and a rename, so a failed
/// run never leaves a partial artifact behind.
pub fn write_artifact(out: Option<&Path>, text: &str) -> CliResult<()> {
    let Some(path) = out else {
        io::stdout().write_all(text.as_bytes())?;
        return Ok(());
    };
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| Failure::io(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    let file_name = path
        .file_name()
        .ok_or_else(|| Failure::io(format!("artifact path {} has no file name", path.display())))?
        .to_string_lossy();
    let tmp = path.with_file_name(format!(".{file_name}.tmp"));
    fs::write(&tmp, text).map_err(|e| Failure::io(format!("cannot write {}: {e}", tmp.display())))?;
    if let Err(e) = fs::rename(&tmp, path) {
        let _ = fs::remove_file(&tmp);
        return Err(Failure::io(format!(
            "cannot move artifact into place at {}: {e}",
            path.display()
        )));
    }
    Ok(())
}
