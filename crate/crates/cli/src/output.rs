use std::io::Write;
use std::path::Path;

use serde_json::Value;

use crate::config::Format;
use crate::CliError;

/// A CSV table with a header row.
#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn to_bytes(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(|e| CliError::Io(e.to_string()))?;
        for r in &self.rows {
            w.write_record(r).map_err(|e| CliError::Io(e.to_string()))?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }
}

/// Everything a command can print; the format flag picks one.
#[derive(Debug, Clone)]
pub struct Rendered {
    pub json: Value,
    pub csv: Option<Table>,
    /// Short human-readable form used on stdout when no format is requested.
    pub text: Option<String>,
    /// Format used when neither `--format` nor the config picks one.
    pub preferred: Format,
}

impl Rendered {
    pub fn json(json: Value) -> Self {
        Rendered {
            json,
            csv: None,
            text: None,
            preferred: Format::Json,
        }
    }

    pub fn bytes(&self, format: Option<Format>, to_file: bool) -> Result<Vec<u8>, CliError> {
        match format {
            Some(Format::Json) => json_bytes(&self.json),
            Some(Format::Csv) => match &self.csv {
                Some(t) => t.to_bytes(),
                None => Err(CliError::Usage("this command has no CSV output".into())),
            },
            None => match (&self.text, to_file) {
                (Some(t), false) => Ok(t.clone().into_bytes()),
                _ => self.bytes(Some(self.preferred), to_file),
            },
        }
    }
}

fn json_bytes(v: &Value) -> Result<Vec<u8>, CliError> {
    let mut b = serde_json::to_vec_pretty(v).map_err(|e| CliError::Io(e.to_string()))?;
    b.push(b'\n');
    Ok(b)
}

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn emit(rendered: &Rendered, format: Option<Format>, out: Option<&Path>) -> Result<(), CliError> {
    let bytes = rendered.bytes(format, out.is_some())?;
    match out {
        Some(p) => write_atomic(p, &bytes),
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| CliError::Io(e.to_string())),
    }
}
