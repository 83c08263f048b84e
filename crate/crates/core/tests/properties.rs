//! Invariants over randomly generated inputs.

use std::collections::BTreeSet;

use itn_core::distributions::{fit_degree_exponent, fit_lognormal, log_histogram, CollapseSpec};
use itn_core::metrics::{all_node_metrics, strengths};
use itn_core::network::{build_network, EdgeWeights, MissingFlowPolicy};
use itn_core::percolation::{percolate, InsertionOrder};
use itn_core::records::pair_flows;
use itn_core::richclub::{rich_club_curve, rich_club_size};
use itn_core::{AnnualTradeNetwork, CountryCode, DuplicatePolicy, DyadicRecord, FlowKind, PairedFlows};
use proptest::prelude::*;

fn code(i: usize) -> CountryCode {
    CountryCode::new(format!("K{i:02}"))
}

fn weight() -> impl Strategy<Value = f64> {
    (-3.0f64..6.0).prop_map(|e| 10f64.powf(e))
}

type Link = (CountryCode, CountryCode, EdgeWeights);

/// Distinct links among up to 20 countries.
fn links() -> impl Strategy<Value = Vec<Link>> {
    prop::collection::vec((0usize..20, 0usize..20, weight(), 0.0f64..=1.0), 1..80).prop_filter_map(
        "needs one link",
        |raw| {
            let mut seen = BTreeSet::new();
            let mut out = Vec::new();
            for (i, j, w, share) in raw {
                if i == j || !seen.insert((i.min(j), i.max(j))) {
                    continue;
                }
                let w_exp = share * w;
                out.push((code(i), code(j), EdgeWeights::new(w_exp, w - w_exp)?));
            }
            (!out.is_empty()).then_some(out)
        },
    )
}

fn network() -> impl Strategy<Value = AnnualTradeNetwork> {
    links().prop_map(|l| AnnualTradeNetwork::from_edges(1990, l).unwrap())
}

fn flow() -> impl Strategy<Value = Option<f64>> {
    prop_oneof![Just(None), weight().prop_map(Some)]
}

fn records() -> impl Strategy<Value = Vec<DyadicRecord>> {
    prop::collection::vec((0usize..6, 0usize..6, flow(), flow(), 1990i32..1992), 0..60).prop_map(
        |raw| {
            raw.into_iter()
                .filter(|(r, p, ..)| r != p)
                .map(|(r, p, e, i, year)| DyadicRecord {
                    year,
                    reporter: code(r),
                    partner: code(p),
                    export_value: e,
                    import_value: i,
                })
                .collect()
        },
    )
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs())
}

proptest! {
    #[test]
    fn pairing_ignores_record_order(
        (recs, shuffled) in records().prop_flat_map(|r| (Just(r.clone()), Just(r).prop_shuffle())),
    ) {
        for policy in [DuplicatePolicy::Mean, DuplicatePolicy::Max] {
            prop_assert_eq!(pair_flows(&recs, 1990, policy), pair_flows(&shuffled, 1990, policy));
        }
    }

    #[test]
    fn paired_flows_round_trip(
        a in 0usize..10, b in 0usize..10,
        flows in (flow(), flow(), flow(), flow()),
    ) {
        prop_assume!(a != b);
        let pf = PairedFlows {
            year: 1990,
            country_a: code(a.min(b)),
            country_b: code(a.max(b)),
            exp_ab: flows.0,
            imp_ab: flows.1,
            exp_ba: flows.2,
            imp_ba: flows.3,
        };
        let back = pair_flows(&pf.to_records(), 1990, DuplicatePolicy::Mean);
        if pf.has_flow() {
            prop_assert_eq!(back, vec![pf]);
        } else {
            prop_assert!(back.is_empty());
        }
    }

    #[test]
    fn network_survives_records_round_trip(net in network()) {
        let pairs = pair_flows(&net.to_records(), 1990, DuplicatePolicy::Mean);
        let rebuilt = build_network(&pairs, 1990, MissingFlowPolicy::Zero).unwrap();
        prop_assert_eq!(rebuilt, net);
    }

    #[test]
    fn build_ignores_link_order(
        (l, shuffled) in links().prop_flat_map(|l| (Just(l.clone()), Just(l).prop_shuffle())),
    ) {
        let a = AnnualTradeNetwork::from_edges(1990, l).unwrap();
        let b = AnnualTradeNetwork::from_edges(1990, shuffled).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn strengths_sum_to_twice_world_trade(net in network()) {
        let total: f64 = strengths(&net).iter().sum();
        prop_assert!(close(total, 2.0 * net.total_weight(), 1e-12));
        net.validate().unwrap();
    }

    #[test]
    fn disparity_ignores_weight_scale(net in network(), c in 1e-3f64..1e3) {
        let scaled = net.scaled(c).unwrap();
        for flow in [FlowKind::Total, FlowKind::Export, FlowKind::Import] {
            let before = all_node_metrics(&net, flow);
            let after = all_node_metrics(&scaled, flow);
            for (m, n) in before.iter().zip(&after) {
                prop_assert_eq!(m.k, n.k);
                prop_assert!(close(n.s, c * m.s, 1e-12));
                match (m.y.value(), n.y.value()) {
                    (Some(y0), Some(y1)) => prop_assert!(close(y0, y1, 1e-12)),
                    (None, None) => {}
                    other => prop_assert!(false, "degeneracy changed: {:?}", other),
                }
            }
        }
    }

    #[test]
    fn histogram_integrates_to_one(
        values in prop::collection::vec(weight(), 2..500),
        bpd in 1u32..20,
    ) {
        prop_assume!(values.iter().any(|v| *v != values[0]));
        let h = log_histogram(&values, bpd).unwrap();
        prop_assert!((h.integral() - 1.0).abs() <= 1e-9);
        prop_assert_eq!(h.counts.iter().sum::<usize>(), values.len());
    }

    #[test]
    fn lognormal_fit_is_location_scale(
        values in prop::collection::vec(weight(), 10..300),
        c in 1e-3f64..1e3,
    ) {
        prop_assume!(values.iter().any(|v| (v / values[0] - 1.0).abs() > 1e-6));
        let spec = CollapseSpec::default();
        let a = fit_lognormal(&values, spec).unwrap();
        let scaled: Vec<f64> = values.iter().map(|v| v * c).collect();
        let b = fit_lognormal(&scaled, spec).unwrap();
        prop_assert!(close(b.w0, c * a.w0, 1e-9));
        prop_assert!(close(b.sigma, a.sigma, 1e-9));
    }

    #[test]
    fn degree_exponent_ignores_duplication(degrees in prop::collection::vec(1usize..200, 20..400)) {
        let first = fit_degree_exponent(&degrees, (1, 200));
        let doubled: Vec<usize> = degrees.iter().chain(&degrees).copied().collect();
        let second = fit_degree_exponent(&doubled, (1, 200));
        match (first, second) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.survival.points, b.survival.points);
                prop_assert_eq!(a.gamma, b.gamma);
            }
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn percolation_is_monotone_and_shares_its_endpoint(net in network()) {
        let desc = percolate(&net, InsertionOrder::Descending);
        let asc = percolate(&net, InsertionOrder::Ascending);
        for curve in [&desc, &asc] {
            prop_assert_eq!(curve.points.len(), net.edge_count());
            prop_assert!(curve.points.windows(2).all(|p| p[0].giant_fraction <= p[1].giant_fraction));
            prop_assert_eq!(curve.points.last().unwrap().f, 1.0);
        }
        prop_assert_eq!(
            desc.points.last().unwrap().giant_fraction,
            asc.points.last().unwrap().giant_fraction
        );
        prop_assert_eq!(percolate(&net, InsertionOrder::Descending), desc);
    }

    #[test]
    fn rich_club_ignores_weight_scale(net in network(), c in 1e-3f64..1e3, e in -10i32..10) {
        let curve = rich_club_curve(&net);
        let scaled = net.scaled(c).unwrap();
        let scaled_curve = rich_club_curve(&scaled);
        for (p, q) in curve.points.iter().zip(&scaled_curve.points) {
            prop_assert!((p.f_w - q.f_w).abs() <= 1e-12);
        }
        // powers of two scale exactly, so the discrete club size cannot move
        let exact = net.scaled(2f64.powi(e)).unwrap();
        for t in [0.25, 0.5, 0.75] {
            prop_assert_eq!(
                rich_club_size(&curve, &net, t).unwrap(),
                rich_club_size(&rich_club_curve(&exact), &exact, t).unwrap()
            );
        }
    }
}
