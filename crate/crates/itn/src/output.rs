//! Result tables, atomic file output and the run manifest.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// A rectangular result. Cells are JSON scalars; a missing value is `null`
/// in JSON and an empty cell in CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

/// Non-finite values have no JSON form and are written as missing.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_bytes(&self, format: OutputFormat) -> Result<Vec<u8>> {
        match format {
            OutputFormat::Json => {
                let mut out = serde_json::to_vec(self)?;
                out.push(b'\n');
                Ok(out)
            }
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(|v| match v {
                        Value::Null => String::new(),
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    }))?;
                }
                w.into_inner()
                    .map_err(|e| Error::io("<table>", e.into_error()))
            }
        }
    }
}

/// Writes `bytes` to `dir/name` through a temporary file in the same
/// directory, so readers never observe a partial file.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf> {
    let target = dir.join(name);
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(tmp.path(), e))?;
    // temporary files are created owner-only
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file()
            .set_permissions(std::fs::Permissions::from_mode(0o644))
            .map_err(|e| Error::io(tmp.path(), e))?;
    }
    tmp.persist(&target).map_err(|e| Error::io(&target, e.error))?;
    Ok(target)
}

/// Which years an artifact covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Years {
    One(i32),
    Span(i32, i32),
}

impl Years {
    pub fn span(years: &[i32]) -> Option<Self> {
        match (years.first(), years.last()) {
            (Some(&a), Some(&b)) if a == b => Some(Years::One(a)),
            (Some(&a), Some(&b)) => Some(Years::Span(a, b)),
            _ => None,
        }
    }

    pub fn label(self) -> String {
        match self {
            Years::One(y) => y.to_string(),
            Years::Span(a, b) => format!("{a}-{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Artifact {
    pub file: String,
    pub analysis: String,
    /// Absent for inputs without years, such as a bare weight list.
    pub years: Option<Years>,
    pub rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct YearError {
    pub year: i32,
    pub message: String,
}

/// Everything needed to repeat a run. Carries no timestamps or absolute
/// paths beyond those given on the command line, so identical runs write
/// identical manifests.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub parameters: Value,
    pub years: Vec<i32>,
    pub artifacts: Vec<Artifact>,
    pub errors: Vec<YearError>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

impl Manifest {
    pub fn new(command: &'static str, parameters: Value) -> Self {
        Manifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            parameters,
            years: Vec::new(),
            artifacts: Vec::new(),
            errors: Vec::new(),
        }
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let mut bytes = serde_json::to_vec_pretty(self)?;
        bytes.push(b'\n');
        write_atomic(dir, MANIFEST_FILE, &bytes)
    }
}

/// Output directory plus format; names files `<years>_<analysis>.<ext>`.
#[derive(Debug, Clone)]
pub struct Sink {
    pub dir: PathBuf,
    pub format: OutputFormat,
}

/// File-name prefix for artifacts without years.
pub const NO_YEAR_LABEL: &str = "weights";

impl Sink {
    pub fn file_name(&self, years: Option<Years>, analysis: &str) -> String {
        let label = years.map(Years::label).unwrap_or_else(|| NO_YEAR_LABEL.into());
        format!("{label}_{analysis}.{}", self.format.extension())
    }

    pub fn table(&self, years: Option<Years>, analysis: &str, table: &Table) -> Result<Artifact> {
        let file = self.file_name(years, analysis);
        write_atomic(&self.dir, &file, &table.to_bytes(self.format)?)?;
        Ok(Artifact {
            file,
            analysis: analysis.into(),
            years,
            rows: table.rows.len(),
        })
    }

    /// For artifacts that are not tables, such as snapshots and record files.
    pub fn raw(&self, file: String, analysis: &str, years: Years, rows: usize, bytes: &[u8]) -> Result<Artifact> {
        write_atomic(&self.dir, &file, bytes)?;
        Ok(Artifact {
            file,
            analysis: analysis.into(),
            years: Some(years),
            rows,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_carry_the_same_cells() {
        let mut t = Table::new(&["name", "x", "n"]);
        t.push(vec!["a,b".into(), num(0.1 + 0.2), 3.into()]);
        t.push(vec!["c".into(), num(f64::NAN), 4.into()]);
        let csv = String::from_utf8(t.to_bytes(OutputFormat::Csv).unwrap()).unwrap();
        assert_eq!(csv, "name,x,n\n\"a,b\",0.30000000000000004,3\nc,,4\n");
        let json = String::from_utf8(t.to_bytes(OutputFormat::Json).unwrap()).unwrap();
        assert_eq!(
            json,
            "{\"columns\":[\"name\",\"x\",\"n\"],\"rows\":[[\"a,b\",0.30000000000000004,3],[\"c\",null,4]]}\n"
        );
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        write_atomic(dir.path(), "f.txt", b"one").unwrap();
        let p = write_atomic(dir.path(), "f.txt", b"two").unwrap();
        assert_eq!(std::fs::read(p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn year_labels() {
        assert_eq!(Years::span(&[1950]).unwrap().label(), "1950");
        assert_eq!(Years::span(&[1948, 1960, 2000]).unwrap().label(), "1948-2000");
        assert_eq!(Years::span(&[]), None);
    }
}
