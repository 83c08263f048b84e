//! Generator contracts and the stylized facts its output should carry.

use itn_core::distributions::{fit_lognormal, CollapseSpec};
use itn_core::metrics::{disparity_curve, strengths, LogBinSpec};
use itn_core::percolation::{fit_exponential_approach, percolate, InsertionOrder};
use itn_core::richclub::{rich_club_curve, rich_club_size};
use itn_core::synth::{generate, generate_network, generate_panel, panel_params, GravityParams, PanelGrowth};
use itn_core::FlowKind;

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut r = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let mid = (i + j) as f64 / 2.0;
        for &k in &idx[i..=j] {
            r[k] = mid;
        }
        i = j + 1;
    }
    r
}

fn spearman(x: &[f64], y: &[f64]) -> f64 {
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

fn default_150() -> GravityParams {
    GravityParams {
        n_countries: 150,
        link_density_target: 0.5,
        noise_logsd: 1.0,
        ..Default::default()
    }
}

#[test]
fn generated_networks_are_valid() {
    for seed in 0..20 {
        let p = GravityParams {
            n_countries: 10 + 7 * seed as usize,
            link_density_target: 0.05 + 0.045 * seed as f64,
            seed,
            ..Default::default()
        };
        let net = generate_network(&p, 1990).unwrap();
        net.validate().unwrap();
        assert_eq!(net.node_count(), p.n_countries);
        assert!(net.edge_count() >= p.target_links());
        for e in net.edges() {
            assert_eq!(e.weights.w, e.weights.w_exp + e.weights.w_imp);
        }
    }
}

#[test]
fn strength_tracks_gdp() {
    for seed in 0..30 {
        let p = GravityParams {
            n_countries: 20 + 5 * seed as usize,
            link_density_target: 0.3,
            seed,
            ..Default::default()
        };
        let syn = generate(&p, 1990).unwrap();
        let rho = spearman(&strengths(&syn.network), &syn.gdp);
        assert!(rho > 0.0, "seed {seed}: rank correlation {rho}");
    }
}

#[test]
fn weights_favour_the_lognormal() {
    let net = generate_network(&default_150(), 2000).unwrap();
    let w: Vec<f64> = net.edges().iter().map(|e| e.weights.w).collect();
    let fit = fit_lognormal(&w, CollapseSpec::default()).unwrap();
    assert!(
        fit.collapse_mse < fit.power_law_mse,
        "collapse {} vs power law {}",
        fit.collapse_mse,
        fit.power_law_mse
    );
}

#[test]
fn disparity_exponent_between_zero_and_one() {
    let nets: Vec<_> = (0..5)
        .map(|seed| generate_network(&GravityParams { seed, ..default_150() }, 2000).unwrap())
        .collect();
    for flow in [FlowKind::Total, FlowKind::Export, FlowKind::Import] {
        let c = disparity_curve(&nets, flow, LogBinSpec::default()).unwrap();
        assert!(c.exponent > 0.0 && c.exponent < 1.0, "{flow:?}: {}", c.exponent);
    }
}

#[test]
fn descending_percolation_has_straight_middle() {
    let net = generate_network(&default_150(), 2000).unwrap();
    let curve = percolate(&net, InsertionOrder::Descending);
    let fit = fit_exponential_approach(&curve.points, (0.05, 0.5)).unwrap();
    assert!(fit.r_squared >= 0.9, "r² = {}", fit.r_squared);
    assert!(fit.rate > 0.0);
}

#[test]
fn panel_follows_node_schedule() {
    let base = GravityParams {
        n_countries: 76,
        link_density_target: 0.52,
        ..Default::default()
    };
    let growth = PanelGrowth::from_endpoints(76, 187, 140.0, 53);
    let panel = generate_panel(&base, 1948..=2000, growth).unwrap();
    assert_eq!(panel.len(), 53);
    for (t, net) in panel.iter().enumerate() {
        let expected = (76.0 * growth.n_multiplier.powi(t as i32)).round() as usize;
        assert_eq!(net.node_count(), expected);
        assert_eq!(net.year(), 1948 + t as i32);
    }
    assert_eq!(panel[0].node_count(), 76);
    assert_eq!(panel[52].node_count(), 187);
}

#[test]
fn world_trade_grows_with_gdp_scale() {
    // with c = 1/2 a weight scales linearly with the GDP scale
    let base = GravityParams {
        n_countries: 76,
        link_density_target: 0.52,
        coupling_exponent: 0.5,
        ..Default::default()
    };
    let growth = PanelGrowth::from_endpoints(76, 187, 140.0, 53);
    let panel = generate_panel(&base, 1948..=2000, growth).unwrap();
    let first = panel[0].summarize();
    let last = panel[52].summarize();
    let mean_ratio = last.mean_w / first.mean_w;
    assert!(mean_ratio > 14.0 && mean_ratio < 1400.0, "mean weight ×{mean_ratio}");
    let total_ratio = last.total_weight / first.total_weight;
    assert!(total_ratio > 140.0 && total_ratio < 14_000.0, "W ×{total_ratio}");
}

#[test]
fn rich_club_shrinks_from_1948_to_2000_shape() {
    let mean_src = |n: usize| {
        let s: f64 = (0..20)
            .map(|seed| {
                let p = GravityParams {
                    n_countries: n,
                    link_density_target: 0.52,
                    seed,
                    ..Default::default()
                };
                let net = generate_network(&p, 2000).unwrap();
                rich_club_size(&rich_club_curve(&net), &net, 0.5).unwrap().fraction
            })
            .sum();
        s / 20.0
    };
    let (early, late) = (mean_src(76), mean_src(187));
    assert!(late < early, "S_RC {early} -> {late}");
}

#[test]
fn unit_growth_keeps_params_but_not_seeds() {
    let base = GravityParams::default();
    let g = PanelGrowth::default();
    let a = panel_params(&base, g, 0, 1990).unwrap();
    let b = panel_params(&base, g, 7, 1997).unwrap();
    assert_eq!(a.n_countries, b.n_countries);
    assert_eq!(a.gdp_logmean, b.gdp_logmean);
    assert_ne!(a.seed, b.seed);
    let panel = generate_panel(&GravityParams { n_countries: 30, ..base }, 1990..=1992, g).unwrap();
    assert_ne!(panel[0].edges(), panel[1].edges());
}
