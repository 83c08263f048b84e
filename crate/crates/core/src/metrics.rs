//! Node degree, strength and disparity, and the degree-binned disparity
//! curve `k Y(k)`.
//!
//! Disparity of node `i` for a chosen flow kind is `Y_i = Σ_j (w_ij / s_i)²`
//! over partners with a positive flow of that kind, where `s_i` is the sum
//! of those flows. It lies in `[1/k, 1]`: `1/k` when all links carry the
//! same weight, near 1 when one link dominates.

use alloc::vec::Vec;

use crate::network::{AnnualTradeNetwork, Edge};
use crate::records::CountryCode;
use crate::regression::fit_line;
use crate::{Error, Result};

/// Which link weight a metric is computed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FlowKind {
    /// `w`, degree `k`
    #[default]
    Total,
    /// flow leaving the node, degree `k_exp`
    Export,
    /// flow entering the node, degree `k_imp`
    Import,
}

impl FlowKind {
    pub fn weight(self, edge: &Edge, node: usize) -> f64 {
        match self {
            FlowKind::Total => edge.weights.w,
            FlowKind::Export => edge.export_from(node),
            FlowKind::Import => edge.import_to(node),
        }
    }
}

/// Disparity of a node, or a marker when the selected flow has zero
/// strength and `Y` is undefined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Disparity {
    Value(f64),
    Degenerate,
}

impl Disparity {
    pub fn value(self) -> Option<f64> {
        match self {
            Disparity::Value(y) => Some(y),
            Disparity::Degenerate => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeMetrics {
    pub k: usize,
    pub k_exp: usize,
    pub k_imp: usize,
    /// Strength on the selected flow kind.
    pub s: f64,
    pub y: Disparity,
    pub flow: FlowKind,
}

impl NodeMetrics {
    /// Degree matching the selected flow kind.
    pub fn flow_degree(&self) -> usize {
        match self.flow {
            FlowKind::Total => self.k,
            FlowKind::Export => self.k_exp,
            FlowKind::Import => self.k_imp,
        }
    }
}

fn metrics_at(net: &AnnualTradeNetwork, node: usize, flow: FlowKind) -> NodeMetrics {
    let edges = net.edges();
    let (mut k, mut k_exp, mut k_imp) = (0, 0, 0);
    let mut s = 0.0;
    for &(_, ei) in net.incident(node) {
        let e = &edges[ei];
        k += 1;
        if e.export_from(node) > 0.0 {
            k_exp += 1;
        }
        if e.import_to(node) > 0.0 {
            k_imp += 1;
        }
        let x = flow.weight(e, node);
        if x > 0.0 {
            s += x;
        }
    }
    let y = if s > 0.0 {
        let mut acc = 0.0;
        for &(_, ei) in net.incident(node) {
            let x = flow.weight(&edges[ei], node);
            if x > 0.0 {
                let r = x / s;
                acc += r * r;
            }
        }
        Disparity::Value(acc)
    } else {
        Disparity::Degenerate
    };
    NodeMetrics {
        k,
        k_exp,
        k_imp,
        s,
        y,
        flow,
    }
}

pub fn node_metrics(
    net: &AnnualTradeNetwork,
    country: &CountryCode,
    flow: FlowKind,
) -> Result<NodeMetrics> {
    let node = net
        .node_index(country)
        .ok_or_else(|| Error::NotFound(country.clone()))?;
    Ok(metrics_at(net, node, flow))
}

/// Metrics of every node, in node order.
pub fn all_node_metrics(net: &AnnualTradeNetwork, flow: FlowKind) -> Vec<NodeMetrics> {
    (0..net.node_count())
        .map(|i| metrics_at(net, i, flow))
        .collect()
}

/// Strength `s_i = Σ_j w_ij` of every node on total weight.
pub fn strengths(net: &AnnualTradeNetwork) -> Vec<f64> {
    let mut s = alloc::vec![0.0; net.node_count()];
    for e in net.edges() {
        s[e.a] += e.weights.w;
        s[e.b] += e.weights.w;
    }
    s
}

/// Logarithmic binning of degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogBinSpec {
    pub bins_per_decade: u32,
    /// Bins with fewer samples are reported but left out of the regression.
    pub min_occupancy: usize,
}

impl Default for LogBinSpec {
    fn default() -> Self {
        LogBinSpec {
            bins_per_decade: 8,
            min_occupancy: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisparityBin {
    pub k_lo: f64,
    pub k_hi: f64,
    /// Mean degree of the samples in the bin; the regression abscissa.
    pub k_center: f64,
    pub mean_ky: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisparityCurve {
    pub flow: FlowKind,
    /// Occupied bins in increasing `k`.
    pub points: Vec<DisparityBin>,
    /// Slope of `ln(mean kY)` against `ln(k_center)`.
    pub exponent: f64,
    pub exponent_stderr: f64,
    pub prefactor: f64,
    pub bins_used: usize,
}

/// `(k, k·Y)` for every non-degenerate node, `k` being the flow degree.
pub fn disparity_samples(net: &AnnualTradeNetwork, flow: FlowKind) -> Vec<(usize, f64)> {
    all_node_metrics(net, flow)
        .into_iter()
        .filter_map(|m| {
            let k = m.flow_degree();
            m.y.value().map(|y| (k, k as f64 * y))
        })
        .collect()
}

fn bin_edge(j: i64, bins_per_decade: u32) -> f64 {
    libm::pow(10.0, j as f64 / bins_per_decade as f64)
}

/// Index `j` with `10^(j/b) <= x < 10^((j+1)/b)`, for `x >= 1`.
pub(crate) fn log_bin_index(x: f64, bins_per_decade: u32) -> i64 {
    let mut j = libm::floor(libm::log10(x) * bins_per_decade as f64) as i64;
    while j > 0 && bin_edge(j, bins_per_decade) > x {
        j -= 1;
    }
    while bin_edge(j + 1, bins_per_decade) <= x {
        j += 1;
    }
    j
}

/// Log-bins pooled `(k, kY)` samples and fits the power law of `kY(k)`.
pub fn disparity_curve_from_samples(
    samples: &[(usize, f64)],
    flow: FlowKind,
    spec: LogBinSpec,
) -> Result<DisparityCurve> {
    if spec.bins_per_decade == 0 {
        return Err(Error::domain("bins_per_decade must be positive"));
    }
    // (bin index, Σk, ΣkY, count), kept sorted by bin index
    let mut bins: Vec<(i64, f64, f64, usize)> = Vec::new();
    let mut sorted: Vec<(usize, f64)> = samples.iter().copied().filter(|&(k, _)| k >= 1).collect();
    sorted.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)));
    for (k, ky) in sorted {
        let j = log_bin_index(k as f64, spec.bins_per_decade);
        match bins.last_mut() {
            Some(last) if last.0 == j => {
                last.1 += k as f64;
                last.2 += ky;
                last.3 += 1;
            }
            _ => bins.push((j, k as f64, ky, 1)),
        }
    }
    let points: Vec<DisparityBin> = bins
        .iter()
        .map(|&(j, sk, sky, c)| DisparityBin {
            k_lo: bin_edge(j, spec.bins_per_decade),
            k_hi: bin_edge(j + 1, spec.bins_per_decade),
            k_center: sk / c as f64,
            mean_ky: sky / c as f64,
            count: c,
        })
        .collect();

    let used: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.count >= spec.min_occupancy && p.mean_ky > 0.0)
        .map(|p| (libm::log(p.k_center), libm::log(p.mean_ky)))
        .collect();
    if used.len() < 3 {
        return Err(Error::insufficient("occupied degree bins", 3, used.len()));
    }
    let fit = fit_line(used.iter().copied())?;
    Ok(DisparityCurve {
        flow,
        points,
        exponent: fit.slope,
        exponent_stderr: fit.slope_stderr,
        prefactor: libm::exp(fit.intercept),
        bins_used: used.len(),
    })
}

/// Pools `(k, kY)` over all networks and fits `kY(k) ~ k^exponent`.
pub fn disparity_curve(
    nets: &[AnnualTradeNetwork],
    flow: FlowKind,
    spec: LogBinSpec,
) -> Result<DisparityCurve> {
    if nets.is_empty() {
        return Err(Error::insufficient("networks", 1, 0));
    }
    let samples: Vec<(usize, f64)> = nets
        .iter()
        .flat_map(|n| disparity_samples(n, flow))
        .collect();
    disparity_curve_from_samples(&samples, flow, spec)
}
