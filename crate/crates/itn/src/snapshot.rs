//! JSON network snapshots.
//!
//! ```json
//! {"year": 1950, "nodes": ["A", "B"], "edges": [["A", "B", 3.5, 1.25]]}
//! ```
//!
//! Each edge is `[a, b, w_exp, w_imp]` with `a < b`. A file holds either
//! one snapshot or an array of them. Numbers are written in shortest
//! round-trip form and parsed exactly, so a snapshot reloads bit for bit.

use std::io::{Read, Write};
use std::path::Path;

use itn_core::network::{AnnualTradeNetwork, EdgeWeights};
use itn_core::CountryCode;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub year: i32,
    pub nodes: Vec<String>,
    pub edges: Vec<(String, String, f64, f64)>,
}

impl Snapshot {
    pub fn from_network(net: &AnnualTradeNetwork) -> Self {
        Snapshot {
            year: net.year(),
            nodes: net.nodes().iter().map(|c| c.to_string()).collect(),
            edges: net
                .links()
                .map(|(a, b, w)| (a.to_string(), b.to_string(), w.w_exp, w.w_imp))
                .collect(),
        }
    }

    pub fn to_network(&self) -> Result<AnnualTradeNetwork> {
        let links = self
            .edges
            .iter()
            .map(|(a, b, e, i)| {
                let w = EdgeWeights::new(*e, *i).ok_or_else(|| {
                    Error::Snapshot(format!("edge {a}-{b} has invalid weights ({e}, {i})"))
                })?;
                Ok((CountryCode::from(a.as_str()), CountryCode::from(b.as_str()), w))
            })
            .collect::<Result<Vec<_>>>()?;
        let net = AnnualTradeNetwork::from_edges(self.year, links)?;
        let listed: Vec<&str> = self.nodes.iter().map(String::as_str).collect();
        let built: Vec<&str> = net.nodes().iter().map(CountryCode::as_str).collect();
        if listed != built {
            return Err(Error::Snapshot(format!(
                "node list of {} does not match the countries with links",
                self.year
            )));
        }
        Ok(net)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(Snapshot),
    Many(Vec<Snapshot>),
}

pub fn read_snapshots<R: Read>(source: R) -> Result<Vec<AnnualTradeNetwork>> {
    let parsed: OneOrMany = serde_json::from_reader(source)?;
    let snaps = match parsed {
        OneOrMany::One(s) => vec![s],
        OneOrMany::Many(v) => v,
    };
    snaps.iter().map(Snapshot::to_network).collect()
}

pub fn read_snapshot_file(path: &Path) -> Result<Vec<AnnualTradeNetwork>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_snapshots(std::io::BufReader::new(file)).map_err(|e| e.in_file(path))
}

/// A single network is written as an object, several as an array.
pub fn write_snapshots<W: Write>(mut sink: W, nets: &[AnnualTradeNetwork]) -> Result<()> {
    let snaps: Vec<Snapshot> = nets.iter().map(Snapshot::from_network).collect();
    match snaps.as_slice() {
        [one] => serde_json::to_writer(&mut sink, one)?,
        many => serde_json::to_writer(&mut sink, many)?,
    }
    sink.write_all(b"\n").map_err(|e| Error::io("<snapshot>", e))?;
    Ok(())
}
