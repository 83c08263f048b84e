//! File formats read back what they wrote.

use itn::ingest::{parse_records, write_records, RecordFormat};
use itn::snapshot::{read_snapshots, write_snapshots};
use itn_core::network::EdgeWeights;
use itn_core::{AnnualTradeNetwork, CountryCode, DyadicRecord};
use proptest::prelude::*;

fn flow() -> impl Strategy<Value = Option<f64>> {
    prop_oneof![Just(None), Just(Some(0.0)), (-4.0f64..9.0).prop_map(|e| Some(10f64.powf(e)))]
}

fn record() -> impl Strategy<Value = DyadicRecord> {
    (1900..2100i32, 0..20usize, 1..20usize, flow(), flow()).prop_map(|(year, a, d, x, m)| {
        let b = (a + d) % 20;
        DyadicRecord::new(year, format!("C{a}"), format!("C{b}"), x, m).unwrap()
    })
}

fn network() -> impl Strategy<Value = AnnualTradeNetwork> {
    (1900..2100i32, prop::collection::btree_map((0..25usize, 0..25usize), (1e-3f64..1e6, 0.0f64..=1.0), 1..60))
        .prop_filter_map("needs a link", |(year, pairs)| {
            let links: Vec<_> = pairs
                .into_iter()
                .filter(|((a, b), _)| a < b)
                .map(|((a, b), (w, share))| {
                    let weights = EdgeWeights::new(w * share, w - w * share).unwrap();
                    (CountryCode::new(format!("C{a}")), CountryCode::new(format!("C{b}")), weights)
                })
                .collect();
            AnnualTradeNetwork::from_edges(year, links).ok()
        })
}

proptest! {
    #[test]
    fn records_round_trip(records in prop::collection::vec(record(), 0..40), tsv in any::<bool>()) {
        let format = if tsv { RecordFormat::Tsv } else { RecordFormat::Csv };
        let mut bytes = Vec::new();
        write_records(&mut bytes, &records, format).unwrap();
        prop_assert_eq!(parse_records(bytes.as_slice(), format).unwrap(), records);
    }

    #[test]
    fn snapshots_round_trip(nets in prop::collection::vec(network(), 1..4)) {
        let mut bytes = Vec::new();
        write_snapshots(&mut bytes, &nets).unwrap();
        prop_assert_eq!(read_snapshots(bytes.as_slice()).unwrap(), nets);
    }
}
