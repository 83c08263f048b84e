//! Conversions from analysis results to output tables.

use itn_core::distributions::{CollapsePoint, DegreeDistFit, LogHistogram, LogNormalFit, PowerLawFit, ScalingFit};
use itn_core::metrics::{all_node_metrics, DisparityCurve};
use itn_core::percolation::{ExponentialFit, InsertionOrder, PercolationCurve};
use itn_core::richclub::{RichClubCurve, RichClubEntry};
use itn_core::{AnnualTradeNetwork, FlowKind, NetworkSummary};
use serde_json::Value;

use crate::output::{num, Table};

pub fn flow_name(flow: FlowKind) -> &'static str {
    match flow {
        FlowKind::Total => "total",
        FlowKind::Export => "export",
        FlowKind::Import => "import",
    }
}

pub fn order_name(order: InsertionOrder) -> &'static str {
    match order {
        InsertionOrder::Descending => "desc",
        InsertionOrder::Ascending => "asc",
    }
}

fn opt(x: Option<f64>) -> Value {
    x.map(num).unwrap_or(Value::Null)
}

pub fn summary(rows: &[NetworkSummary]) -> Table {
    let mut t = Table::new(&["year", "n", "l", "rho", "total_weight", "mean_w", "w_max", "w_max_over_total"]);
    for s in rows {
        t.push(vec![
            s.year.into(),
            s.n.into(),
            s.l.into(),
            num(s.rho),
            num(s.total_weight),
            num(s.mean_w),
            num(s.w_max),
            num(s.w_max_over_total),
        ]);
    }
    t
}

/// One row per country. `s` and `y` are on the chosen flow; `y` is empty
/// for a node without flow of that kind.
pub fn node_metrics(net: &AnnualTradeNetwork, flow: FlowKind) -> Table {
    let mut t = Table::new(&["country", "flow", "k", "k_exp", "k_imp", "s", "y"]);
    for (code, m) in net.nodes().iter().zip(all_node_metrics(net, flow)) {
        t.push(vec![
            code.as_str().into(),
            flow_name(flow).into(),
            m.k.into(),
            m.k_exp.into(),
            m.k_imp.into(),
            num(m.s),
            opt(m.y.value()),
        ]);
    }
    t
}

/// Binned `kY(k)` with the fitted exponent repeated on each row of a flow.
pub fn disparity(curves: &[DisparityCurve]) -> Table {
    let mut t = Table::new(&[
        "flow",
        "k_lo",
        "k_hi",
        "k_center",
        "mean_ky",
        "count",
        "exponent",
        "exponent_stderr",
        "prefactor",
        "bins_used",
    ]);
    for c in curves {
        for p in &c.points {
            t.push(vec![
                flow_name(c.flow).into(),
                num(p.k_lo),
                num(p.k_hi),
                num(p.k_center),
                num(p.mean_ky),
                p.count.into(),
                num(c.exponent),
                num(c.exponent_stderr),
                num(c.prefactor),
                c.bins_used.into(),
            ]);
        }
    }
    t
}

/// Power-law and log-normal fits of one weight sample. Either side may be
/// missing when its fit is not defined for the sample.
pub fn weight_fit(n: usize, power: Option<&PowerLawFit>, lognormal: Option<&LogNormalFit>) -> Table {
    let mut t = Table::new(&[
        "n",
        "tau",
        "tau_stderr",
        "fit_lo",
        "fit_hi",
        "tau_r_squared",
        "tau_bins_used",
        "w0",
        "sigma",
        "collapse_mse",
        "power_law_mse",
    ]);
    t.push(vec![
        n.into(),
        opt(power.map(|p| p.tau)),
        opt(power.map(|p| p.tau_stderr)),
        opt(power.map(|p| p.fit_range.0)),
        opt(power.map(|p| p.fit_range.1)),
        opt(power.map(|p| p.r_squared)),
        power.map(|p| p.bins_used.into()).unwrap_or(Value::Null),
        opt(lognormal.map(|l| l.w0)),
        opt(lognormal.map(|l| l.sigma)),
        opt(lognormal.map(|l| l.collapse_mse)),
        opt(lognormal.map(|l| l.power_law_mse)),
    ]);
    t
}

pub fn histogram(h: &LogHistogram) -> Table {
    let mut t = Table::new(&["bin_lo", "bin_hi", "center", "count", "density"]);
    for i in 0..h.bin_count() {
        t.push(vec![
            num(h.bin_edges[i]),
            num(h.bin_edges[i + 1]),
            num(h.center(i)),
            h.counts[i].into(),
            num(h.densities[i]),
        ]);
    }
    t
}

pub fn collapse(points: &[CollapsePoint]) -> Table {
    let mut t = Table::new(&["x", "y", "parabola", "count"]);
    for p in points {
        t.push(vec![num(p.x), num(p.y), num(p.x * p.x), p.count.into()]);
    }
    t
}

/// Curves for one or both orders, keeping every `emit_every`-th point.
pub fn percolation(curves: &[PercolationCurve], emit_every: usize) -> Table {
    let mut t = Table::new(&["order", "inserted", "f", "giant_fraction", "gap"]);
    for c in curves {
        for p in c.downsampled(emit_every) {
            t.push(vec![
                order_name(c.order).into(),
                p.inserted.into(),
                num(p.f),
                num(p.giant_fraction),
                num(1.0 - p.giant_fraction),
            ]);
        }
    }
    t
}

pub fn percolation_fit(fits: &[(InsertionOrder, ExponentialFit)]) -> Table {
    let mut t = Table::new(&["order", "rate", "rate_stderr", "f_lo", "f_hi", "r_squared", "points_used"]);
    for (order, f) in fits {
        t.push(vec![
            order_name(*order).into(),
            num(f.rate),
            num(f.rate_stderr),
            num(f.fit_range.0),
            num(f.fit_range.1),
            num(f.r_squared),
            f.points_used.into(),
        ]);
    }
    t
}

/// The curve from the full node set down to the strongest country. Each
/// row names the weakest member of the club it describes.
pub fn richclub(net: &AnnualTradeNetwork, curve: &RichClubCurve) -> Table {
    let mut t = Table::new(&["weakest_member", "club_size", "s_over_smax", "f_w"]);
    for (p, &node) in curve.points.iter().zip(&curve.ranking) {
        t.push(vec![
            net.nodes()[node].as_str().into(),
            p.club_size.into(),
            num(p.s_over_smax),
            num(p.f_w),
        ]);
    }
    t
}

pub fn richclub_series(entries: &[RichClubEntry]) -> Table {
    let mut t = Table::new(&["year", "s_rc", "club_size", "n"]);
    for e in entries {
        t.push(vec![e.year.into(), num(e.s_rc), e.club_size.into(), e.n.into()]);
    }
    t
}

/// Per-year panel statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelRow {
    pub summary: NetworkSummary,
    pub mean_k: f64,
    pub k_max: usize,
    pub s_rc: f64,
    pub club_size: usize,
}

pub fn timeseries(rows: &[PanelRow]) -> Table {
    let mut t = Table::new(&[
        "year",
        "n",
        "l",
        "rho",
        "mean_k",
        "k_max",
        "total_weight",
        "mean_w",
        "w_max_over_total",
        "s_rc",
        "club_size",
    ]);
    for r in rows {
        let s = &r.summary;
        t.push(vec![
            s.year.into(),
            s.n.into(),
            s.l.into(),
            num(s.rho),
            num(r.mean_k),
            r.k_max.into(),
            num(s.total_weight),
            num(s.mean_w),
            num(s.w_max_over_total),
            num(r.s_rc),
            r.club_size.into(),
        ]);
    }
    t
}

pub fn scaling(fits: &[(&'static str, ScalingFit)]) -> Table {
    let mut t = Table::new(&["quantity", "exponent", "prefactor", "exponent_stderr", "points"]);
    for (name, f) in fits {
        t.push(vec![
            (*name).into(),
            num(f.exponent),
            num(f.prefactor),
            num(f.exponent_stderr),
            f.points.len().into(),
        ]);
    }
    t
}

pub fn degree_survival(fit: &DegreeDistFit) -> Table {
    let mut t = Table::new(&["k", "survival", "gamma", "gamma_stderr", "k_lo", "k_hi"]);
    for &(k, p) in &fit.survival.points {
        t.push(vec![
            k.into(),
            num(p),
            num(fit.gamma),
            num(fit.gamma_stderr),
            fit.fit_range.0.into(),
            fit.fit_range.1.into(),
        ]);
    }
    t
}
