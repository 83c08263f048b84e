//! Strength-ordered rich club.
//!
//! Nodes are ranked by increasing strength and removed weakest first. The
//! club with threshold `s` is the set of nodes with strength at least `s`;
//! `f_w(s)` is the share of world trade exchanged inside it.

use alloc::vec::Vec;

use crate::metrics::strengths;
use crate::network::AnnualTradeNetwork;
use crate::{Error, Result};

pub const DEFAULT_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RichClubPoint {
    /// Strength of the weakest club member over the strongest node's.
    pub s_over_smax: f64,
    pub f_w: f64,
    pub club_size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RichClubCurve {
    /// One point per club, from the full node set down to a single node.
    pub points: Vec<RichClubPoint>,
    pub s_max: f64,
    /// Node indices in increasing strength, ties by country code.
    pub ranking: Vec<usize>,
}

/// Node indices sorted by ascending strength, ties by country code.
pub fn strength_ranking(net: &AnnualTradeNetwork) -> (Vec<usize>, Vec<f64>) {
    let s = strengths(net);
    let mut order: Vec<usize> = (0..net.node_count()).collect();
    order.sort_by(|&i, &j| s[i].total_cmp(&s[j]).then(i.cmp(&j)));
    (order, s)
}

pub fn rich_club_curve(net: &AnnualTradeNetwork) -> RichClubCurve {
    let n = net.node_count();
    let (ranking, s) = strength_ranking(net);
    let mut rank = alloc::vec![0usize; n];
    for (r, &node) in ranking.iter().enumerate() {
        rank[node] = r;
    }
    let edges = net.edges();

    // internal[r]: trade among the nodes ranked r..n, built by adding nodes
    // back from the strongest down so each step adds non-negative terms
    let mut internal = alloc::vec![0.0f64; n + 1];
    for r in (0..n).rev() {
        let node = ranking[r];
        let added: f64 = net
            .incident(node)
            .iter()
            .filter(|(nbr, _)| rank[*nbr] > r)
            .map(|(_, ei)| edges[*ei].weights.w)
            .sum();
        internal[r] = internal[r + 1] + added;
    }
    let total = internal[0];
    let s_max = ranking.last().map(|&i| s[i]).unwrap_or(0.0);

    let points = (0..n)
        .map(|r| RichClubPoint {
            s_over_smax: s[ranking[r]] / s_max,
            f_w: internal[r] / total,
            club_size: n - r,
        })
        .collect();
    RichClubCurve {
        points,
        s_max,
        ranking,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RichClubSize {
    pub club_size: usize,
    /// `S_RC = club_size / N`
    pub fraction: f64,
}

/// Smallest club whose internal trade is at least `threshold · W`.
pub fn rich_club_size(
    curve: &RichClubCurve,
    net: &AnnualTradeNetwork,
    threshold: f64,
) -> Result<RichClubSize> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::domain(alloc::format!(
            "rich-club threshold {threshold} must lie in (0, 1)"
        )));
    }
    let n = net.node_count();
    if curve.points.len() != n {
        return Err(Error::InvalidNetwork(
            "rich-club curve does not belong to this network".into(),
        ));
    }
    let club_size = curve
        .points
        .iter()
        .rev()
        .find(|p| p.f_w >= threshold)
        .map(|p| p.club_size)
        .unwrap_or(n);
    Ok(RichClubSize {
        club_size,
        fraction: club_size as f64 / n as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RichClubEntry {
    pub year: i32,
    pub s_rc: f64,
    pub club_size: usize,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RichClubSeries {
    pub entries: Vec<RichClubEntry>,
}

pub fn rich_club_series(nets: &[AnnualTradeNetwork], threshold: f64) -> Result<RichClubSeries> {
    if nets.is_empty() {
        return Err(Error::insufficient("networks", 1, 0));
    }
    let mut entries = Vec::with_capacity(nets.len());
    for net in nets {
        let size = rich_club_size(&rich_club_curve(net), net, threshold)?;
        entries.push(RichClubEntry {
            year: net.year(),
            s_rc: size.fraction,
            club_size: size.club_size,
            n: net.node_count(),
        });
    }
    entries.sort_by_key(|e| e.year);
    if let Some(w) = entries.windows(2).find(|w| w[0].year == w[1].year) {
        return Err(Error::DuplicateYear(w[0].year));
    }
    Ok(RichClubSeries { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::EdgeWeights;
    use alloc::vec;

    fn net(year: i32, links: &[(&str, &str, f64)]) -> AnnualTradeNetwork {
        AnnualTradeNetwork::from_edges(
            year,
            links
                .iter()
                .map(|&(a, b, w)| (a.into(), b.into(), EdgeWeights::new(w, 0.0).unwrap())),
        )
        .unwrap()
    }

    #[test]
    fn triangle_first_removal() {
        let c = rich_club_curve(&net(2000, &[("A", "B", 1.0), ("A", "C", 1.0), ("B", "C", 1.0)]));
        let fw: Vec<f64> = c.points.iter().map(|p| p.f_w).collect();
        assert_eq!(fw, vec![1.0, 1.0 / 3.0, 0.0]);
        assert_eq!(c.ranking, vec![0, 1, 2]);
    }

    #[test]
    fn star_leaves_removed_first() {
        let c = rich_club_curve(&net(2000, &[("X", "A", 1.0), ("X", "B", 1.0), ("X", "C", 1.0)]));
        let fw: Vec<f64> = c.points.iter().map(|p| p.f_w).collect();
        assert_eq!(fw, vec![1.0, 2.0 / 3.0, 1.0 / 3.0, 0.0]);
        assert_eq!(c.points[3].club_size, 1);
        assert_eq!(c.points[3].s_over_smax, 1.0);
        assert_eq!(c.points[0].s_over_smax, 1.0 / 3.0);
    }

    #[test]
    fn two_nodes_need_both() {
        let g = net(2000, &[("A", "B", 4.0)]);
        let size = rich_club_size(&rich_club_curve(&g), &g, 0.5).unwrap();
        assert_eq!((size.club_size, size.fraction), (2, 1.0));
    }

    #[test]
    fn threshold_domain() {
        let g = net(2000, &[("A", "B", 4.0)]);
        let c = rich_club_curve(&g);
        for t in [0.0, 1.0, -0.5, 1.5, f64::NAN] {
            assert!(matches!(rich_club_size(&c, &g, t), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn three_hubs_hold_the_trade() {
        // hubs H1..H3 trade 80 among themselves, 7 spokes hold the rest
        let mut links = vec![("H1", "H2", 30.0), ("H1", "H3", 25.0), ("H2", "H3", 25.0)];
        let spokes = ["S1", "S2", "S3", "S4", "S5", "S6", "S7"];
        let weights = [4.0, 3.0, 3.0, 3.0, 3.0, 2.0, 2.0];
        for (s, w) in spokes.iter().zip(weights) {
            links.push(("H1", s, w));
        }
        links.push(("S1", "S2", 0.5));
        links.push(("S3", "S4", 0.5));
        let g = net(2000, &links);
        let total = g.total_weight();
        let size = rich_club_size(&rich_club_curve(&g), &g, 0.5).unwrap();
        assert_eq!(size.club_size, 3);
        assert!(80.0 / total > 0.75);
    }

    #[test]
    fn series_ordering_and_duplicates() {
        let a = net(2001, &[("A", "B", 1.0), ("B", "C", 2.0)]);
        let b = a.clone().with_year(1999);
        let s = rich_club_series(&[a.clone(), b], 0.5).unwrap();
        assert_eq!(s.entries[0].year, 1999);
        assert_eq!(s.entries[0].s_rc, s.entries[1].s_rc);
        assert_eq!(
            rich_club_series(&[a.clone(), a], 0.5),
            Err(Error::DuplicateYear(2001))
        );
    }
}
