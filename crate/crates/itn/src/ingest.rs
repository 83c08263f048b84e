//! Delimited dyadic-record files.
//!
//! The header must name the columns `year`, `reporter`, `partner`, `export`
//! and `import` (any order, extra columns ignored). An empty numeric cell is
//! a missing report.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use itn_core::network::{build_network, MissingFlowPolicy};
use itn_core::records::pair_flows;
use itn_core::{AnnualTradeNetwork, DuplicatePolicy, DyadicRecord};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RecordFormat {
    #[default]
    Csv,
    Tsv,
}

impl RecordFormat {
    pub fn delimiter(self) -> u8 {
        match self {
            RecordFormat::Csv => b',',
            RecordFormat::Tsv => b'\t',
        }
    }
}

const COLUMNS: [&str; 5] = ["year", "reporter", "partner", "export", "import"];

fn parse_error(line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_cell<T: FromStr>(cell: &str, column: &str, line: u64) -> Result<T> {
    cell.parse()
        .map_err(|_| parse_error(line, format!("{column} value {cell:?} is not a number")))
}

fn parse_flow(cell: &str, column: &str, line: u64) -> Result<Option<f64>> {
    if cell.is_empty() {
        Ok(None)
    } else {
        parse_cell(cell, column, line).map(Some)
    }
}

/// One record per data row, in file order.
pub fn parse_records<R: Read>(source: R, format: RecordFormat) -> Result<Vec<DyadicRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(format.delimiter())
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);

    let header = reader.headers()?.clone();
    let mut index = [0usize; 5];
    for (slot, name) in index.iter_mut().zip(COLUMNS) {
        *slot = header
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| parse_error(1, format!("header has no {name:?} column")))?;
    }

    let mut out = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        if row.len() != header.len() {
            return Err(parse_error(
                line,
                format!("expected {} columns, found {}", header.len(), row.len()),
            ));
        }
        let year = parse_cell(&row[index[0]], "year", line)?;
        let export = parse_flow(&row[index[3]], "export", line)?;
        let import = parse_flow(&row[index[4]], "import", line)?;
        let record = DyadicRecord::new(year, &row[index[1]], &row[index[2]], export, import)
            .map_err(|e| parse_error(line, e.to_string()))?;
        out.push(record);
    }
    Ok(out)
}

/// Writes records with the canonical header. Values use the shortest
/// decimal form that reads back to the same `f64`.
pub fn write_records<W: Write>(sink: W, records: &[DyadicRecord], format: RecordFormat) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .delimiter(format.delimiter())
        .from_writer(sink);
    writer.write_record(COLUMNS)?;
    let flow = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in records {
        writer.write_record([
            r.year.to_string(),
            r.reporter.to_string(),
            r.partner.to_string(),
            flow(r.export_value),
            flow(r.import_value),
        ])?;
    }
    writer.flush().map_err(|e| Error::io("<records>", e))?;
    Ok(())
}

pub fn read_records_file(path: &Path, format: RecordFormat) -> Result<Vec<DyadicRecord>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_records(std::io::BufReader::new(file), format).map_err(|e| e.in_file(path))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BuildOptions {
    pub on_duplicate: DuplicatePolicy,
    pub missing: MissingFlowPolicy,
}

/// Groups records by year and builds one network per year. A year whose
/// records leave no positive link maps to its error.
pub fn networks_by_year(
    records: &[DyadicRecord],
    opts: BuildOptions,
) -> BTreeMap<i32, itn_core::Result<AnnualTradeNetwork>> {
    let mut by_year: BTreeMap<i32, Vec<DyadicRecord>> = BTreeMap::new();
    for r in records {
        by_year.entry(r.year).or_default().push(r.clone());
    }
    by_year
        .into_iter()
        .map(|(year, recs)| {
            let pairs = pair_flows(&recs, year, opts.on_duplicate);
            (year, build_network(&pairs, year, opts.missing))
        })
        .collect()
}
