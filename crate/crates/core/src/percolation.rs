//! Weight-ordered link insertion and growth of the giant component.
//!
//! Starting from `N` isolated countries, links are inserted one at a time
//! sorted by total weight, and the fraction of nodes in the largest
//! component is recorded after every insertion.

use alloc::vec::Vec;

use crate::dsu::DisjointSet;
use crate::network::AnnualTradeNetwork;
use crate::regression::fit_line;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InsertionOrder {
    /// Heaviest link first.
    #[default]
    Descending,
    Ascending,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PercolationPoint {
    pub inserted: usize,
    /// `inserted / L`
    pub f: f64,
    /// `S_g / N`
    pub giant_fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PercolationCurve {
    pub order: InsertionOrder,
    pub n: usize,
    /// One point per inserted link.
    pub points: Vec<PercolationPoint>,
}

impl PercolationCurve {
    /// Every `every`-th point, always keeping the last one.
    pub fn downsampled(&self, every: usize) -> Vec<PercolationPoint> {
        let every = every.max(1);
        let last = self.points.len().saturating_sub(1);
        self.points
            .iter()
            .enumerate()
            .filter(|(i, _)| (i + 1) % every == 0 || *i == last)
            .map(|(_, p)| *p)
            .collect()
    }
}

/// Edge indices in insertion order. Ties in weight fall back to the
/// canonical pair order, which is the edge index order.
pub fn insertion_sequence(net: &AnnualTradeNetwork, order: InsertionOrder) -> Vec<usize> {
    let edges = net.edges();
    let mut idx: Vec<usize> = (0..edges.len()).collect();
    idx.sort_by(|&i, &j| {
        let (wi, wj) = (edges[i].weights.w, edges[j].weights.w);
        let by_weight = match order {
            InsertionOrder::Descending => wj.total_cmp(&wi),
            InsertionOrder::Ascending => wi.total_cmp(&wj),
        };
        by_weight.then(i.cmp(&j))
    });
    idx
}

pub fn percolate(net: &AnnualTradeNetwork, order: InsertionOrder) -> PercolationCurve {
    let n = net.node_count();
    let l = net.edge_count();
    let edges = net.edges();
    let mut dsu = DisjointSet::new(n);
    let points = insertion_sequence(net, order)
        .into_iter()
        .enumerate()
        .map(|(m, ei)| {
            dsu.union(edges[ei].a, edges[ei].b);
            PercolationPoint {
                inserted: m + 1,
                f: (m + 1) as f64 / l as f64,
                giant_fraction: dsu.largest() as f64 / n as f64,
            }
        })
        .collect();
    PercolationCurve { order, n, points }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialFit {
    /// `1 - S_g/N ~ exp(-rate · f)`
    pub rate: f64,
    pub rate_stderr: f64,
    pub fit_range: (f64, f64),
    pub r_squared: f64,
    pub points_used: usize,
}

/// Semi-log slope of the gap `1 - S_g/N` against `f` over points in
/// `[f_lo, f_hi]` whose gap is still positive.
pub fn fit_exponential_approach(
    points: &[PercolationPoint],
    range: (f64, f64),
) -> Result<ExponentialFit> {
    let (lo, hi) = range;
    if !(lo <= hi) {
        return Err(Error::domain("fit range must satisfy f_lo <= f_hi"));
    }
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.f >= lo && p.f <= hi && p.giant_fraction < 1.0)
        .map(|p| (p.f, libm::log(1.0 - p.giant_fraction)))
        .collect();
    if pts.len() < 3 {
        return Err(Error::insufficient("points with S_g/N < 1 in range", 3, pts.len()));
    }
    let fit = fit_line(pts.iter().copied())?;
    Ok(ExponentialFit {
        rate: -fit.slope,
        rate_stderr: fit.slope_stderr,
        fit_range: range,
        r_squared: fit.r_squared,
        points_used: pts.len(),
    })
}
