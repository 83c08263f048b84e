//! Implementation vs independent recomputation on random inputs.

mod common;

use common::{bfs_largest, random_network};
use itn_core::metrics::{all_node_metrics, strengths};
use itn_core::percolation::{insertion_sequence, percolate, InsertionOrder};
use itn_core::richclub::{rich_club_curve, rich_club_size};
use itn_core::{AnnualTradeNetwork, Disparity, FlowKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Disparity by scanning the global edge list for edges touching `node`.
fn brute_force_disparity(net: &AnnualTradeNetwork, node: usize, flow: FlowKind) -> Option<f64> {
    let incident: Vec<f64> = net
        .edges()
        .iter()
        .filter(|e| e.a == node || e.b == node)
        .map(|e| flow.weight(e, node))
        .filter(|x| *x > 0.0)
        .collect();
    let s: f64 = incident.iter().sum();
    if s == 0.0 {
        return None;
    }
    Some(incident.iter().map(|x| (x / s) * (x / s)).sum())
}

#[test]
fn disparity_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.random_range(2..=30);
        let p = rng.random_range(0.05..0.9);
        let net = random_network(&mut rng, n, p);
        for flow in [FlowKind::Total, FlowKind::Export, FlowKind::Import] {
            for (i, m) in all_node_metrics(&net, flow).iter().enumerate() {
                assert_eq!(m.y.value(), brute_force_disparity(&net, i, flow));
                if let Disparity::Value(y) = m.y {
                    let k = m.flow_degree() as f64;
                    assert!(y >= 1.0 / k - 1e-15 && y <= 1.0 + 1e-15, "Y={y} k={k}");
                }
            }
        }
    }
}

#[test]
fn percolation_matches_bfs() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let n = rng.random_range(2..=30);
        let p = rng.random_range(0.05..0.6);
        let net = random_network(&mut rng, n, p);
        for order in [InsertionOrder::Descending, InsertionOrder::Ascending] {
            let curve = percolate(&net, order);
            let seq = insertion_sequence(&net, order);
            let mut inserted = Vec::new();
            for (p, &ei) in curve.points.iter().zip(&seq) {
                let e = net.edges()[ei];
                inserted.push((e.a, e.b));
                let n = net.node_count();
                let expected = bfs_largest(n, &inserted) as f64 / n as f64;
                assert_eq!(p.giant_fraction, expected);
            }
        }
    }
}

#[test]
fn insertion_sequence_is_sorted() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let net = random_network(&mut rng, 25, 0.3);
    let seq = insertion_sequence(&net, InsertionOrder::Descending);
    let w: Vec<f64> = seq.iter().map(|&i| net.edges()[i].weights.w).collect();
    assert!(w.windows(2).all(|p| p[0] >= p[1]));
}

/// Smallest strength-ordered suffix holding `threshold` of world trade,
/// recomputing internal trade from scratch for every suffix.
fn exhaustive_club(net: &AnnualTradeNetwork, threshold: f64) -> usize {
    let s = strengths(net);
    let n = net.node_count();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| s[i].total_cmp(&s[j]).then(i.cmp(&j)));
    let total: f64 = net.edges().iter().map(|e| e.weights.w).sum();
    for size in 1..=n {
        let members = &order[n - size..];
        let internal: f64 = net
            .edges()
            .iter()
            .filter(|e| members.contains(&e.a) && members.contains(&e.b))
            .map(|e| e.weights.w)
            .sum();
        if internal / total >= threshold {
            return size;
        }
    }
    n
}

#[test]
fn rich_club_matches_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..200 {
        let n = rng.random_range(2..=15);
        let p = rng.random_range(0.1..0.9);
        let net = random_network(&mut rng, n, p);
        let curve = rich_club_curve(&net);
        for t in [0.5, 0.25, 0.8] {
            let got = rich_club_size(&curve, &net, t).unwrap();
            assert_eq!(got.club_size, exhaustive_club(&net, t));
        }
        assert_eq!(curve.points[0].f_w, 1.0);
        assert_eq!(curve.points.last().unwrap().f_w, 0.0);
        assert!(curve.points.windows(2).all(|p| p[0].f_w >= p[1].f_w));
    }
}

#[test]
fn rich_club_curve_matches_recomputation() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..50 {
        let net = random_network(&mut rng, 15, 0.4);
        let curve = rich_club_curve(&net);
        let total = net.total_weight();
        for (r, p) in curve.points.iter().enumerate() {
            let members = &curve.ranking[r..];
            let internal: f64 = net
                .edges()
                .iter()
                .filter(|e| members.contains(&e.a) && members.contains(&e.b))
                .map(|e| e.weights.w)
                .sum();
            assert!((p.f_w - internal / total).abs() <= 1e-12);
        }
    }
}
