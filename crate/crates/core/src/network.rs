//! Symmetrized annual trade network.
//!
//! For a canonical pair `a < b` the stored weights are
//!
//! ```text
//! w_exp = (exp_ab + imp_ba) / 2     // a -> b
//! w_imp = (exp_ba + imp_ab) / 2     // b -> a
//! w     = w_exp + w_imp
//! ```
//!
//! A missing report is either taken as zero or replaced by its mirror
//! report, see [`MissingFlowPolicy`].

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::records::{CountryCode, DyadicRecord, PairedFlows};
use crate::{Error, Result};

/// Weights of one undirected link, million USD.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeWeights {
    pub w_exp: f64,
    pub w_imp: f64,
    pub w: f64,
}

impl EdgeWeights {
    /// Returns `None` when the total is not strictly positive or either
    /// component is negative or non-finite.
    pub fn new(w_exp: f64, w_imp: f64) -> Option<Self> {
        let ok = |v: f64| v.is_finite() && v >= 0.0;
        if !ok(w_exp) || !ok(w_imp) {
            return None;
        }
        let w = w_exp + w_imp;
        (w > 0.0 && w.is_finite()).then_some(EdgeWeights { w_exp, w_imp, w })
    }

    pub fn scaled(&self, c: f64) -> Option<Self> {
        EdgeWeights::new(self.w_exp * c, self.w_imp * c)
    }
}

/// Treatment of a missing report inside the pair average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MissingFlowPolicy {
    /// Missing counts as 0, so a one-sided report of 10 gives 5.
    #[default]
    Zero,
    /// Missing takes the value of the mirror report, so a one-sided report
    /// of 10 gives 10.
    Copy,
}

impl MissingFlowPolicy {
    fn average(self, x: Option<f64>, y: Option<f64>) -> f64 {
        match (self, x, y) {
            (_, Some(x), Some(y)) => (x + y) / 2.0,
            (MissingFlowPolicy::Zero, Some(v), None) | (MissingFlowPolicy::Zero, None, Some(v)) => {
                v / 2.0
            }
            (MissingFlowPolicy::Copy, Some(v), None) | (MissingFlowPolicy::Copy, None, Some(v)) => v,
            (_, None, None) => 0.0,
        }
    }
}

/// Reconciles the four flows of a pair. `None` means "no edge".
pub fn symmetrize(pf: &PairedFlows, policy: MissingFlowPolicy) -> Option<EdgeWeights> {
    let clean = |v: Option<f64>| v.filter(|x| *x > 0.0);
    let w_exp = policy.average(clean(pf.exp_ab), clean(pf.imp_ba));
    let w_imp = policy.average(clean(pf.exp_ba), clean(pf.imp_ab));
    EdgeWeights::new(w_exp, w_imp)
}

/// Undirected link between node indices `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub weights: EdgeWeights,
}

impl Edge {
    pub fn other(&self, node: usize) -> usize {
        if node == self.a {
            self.b
        } else {
            self.a
        }
    }

    /// Flow leaving `node` along this edge.
    pub fn export_from(&self, node: usize) -> f64 {
        if node == self.a {
            self.weights.w_exp
        } else {
            self.weights.w_imp
        }
    }

    /// Flow entering `node` along this edge.
    pub fn import_to(&self, node: usize) -> f64 {
        if node == self.a {
            self.weights.w_imp
        } else {
            self.weights.w_exp
        }
    }
}

/// Immutable weighted network for one year.
///
/// Nodes are sorted by country code and identified by their index, so
/// index order is the canonical order. Edges are sorted by `(a, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnualTradeNetwork {
    year: i32,
    nodes: Vec<CountryCode>,
    edges: Vec<Edge>,
    // per node: (neighbor, edge index), in edge order
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl AnnualTradeNetwork {
    /// Builds a network from explicit links. The node set is the union of
    /// endpoints.
    pub fn from_edges<I>(year: i32, links: I) -> Result<Self>
    where
        I: IntoIterator<Item = (CountryCode, CountryCode, EdgeWeights)>,
    {
        let mut canonical: BTreeMap<(CountryCode, CountryCode), EdgeWeights> = BTreeMap::new();
        for (x, y, weights) in links {
            if x == y {
                return Err(Error::InvalidNetwork(format!("self-loop at {x}")));
            }
            if EdgeWeights::new(weights.w_exp, weights.w_imp) != Some(weights) {
                return Err(Error::InvalidNetwork(format!(
                    "edge {x}-{y} has inconsistent weights"
                )));
            }
            // a reversed pair swaps the export/import roles
            let (key, weights) = if x < y {
                ((x, y), weights)
            } else {
                let flipped = EdgeWeights::new(weights.w_imp, weights.w_exp)
                    .expect("flipped weights stay valid");
                ((y, x), flipped)
            };
            if canonical.contains_key(&key) {
                return Err(Error::InvalidNetwork(format!(
                    "duplicate edge {}-{}",
                    key.0, key.1
                )));
            }
            canonical.insert(key, weights);
        }
        if canonical.is_empty() {
            return Err(Error::EmptyNetwork);
        }

        let mut nodes: Vec<CountryCode> = canonical
            .keys()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect();
        nodes.sort();
        nodes.dedup();

        let index = |c: &CountryCode| nodes.binary_search(c).expect("endpoint is a node");
        let edges: Vec<Edge> = canonical
            .iter()
            .map(|((a, b), weights)| Edge {
                a: index(a),
                b: index(b),
                weights: *weights,
            })
            .collect();

        let mut adjacency = alloc::vec![Vec::new(); nodes.len()];
        for (i, e) in edges.iter().enumerate() {
            adjacency[e.a].push((e.b, i));
            adjacency[e.b].push((e.a, i));
        }

        Ok(AnnualTradeNetwork {
            year,
            nodes,
            edges,
            adjacency,
        })
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn with_year(mut self, year: i32) -> Self {
        self.year = year;
        self
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[CountryCode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_index(&self, code: &CountryCode) -> Option<usize> {
        self.nodes.binary_search(code).ok()
    }

    /// `(neighbor, edge index)` pairs of `node` in edge order.
    pub fn incident(&self, node: usize) -> &[(usize, usize)] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    /// Edge triples `(a, b, weights)` with country codes.
    pub fn links(&self) -> impl Iterator<Item = (&CountryCode, &CountryCode, &EdgeWeights)> + '_ {
        self.edges
            .iter()
            .map(move |e| (&self.nodes[e.a], &self.nodes[e.b], &e.weights))
    }

    /// Copy of the network with every weight multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::domain(format!("scale factor {c} must be positive")));
        }
        let mut out = self.clone();
        for e in &mut out.edges {
            e.weights = e
                .weights
                .scaled(c)
                .ok_or_else(|| Error::domain("scaled weight left the valid range"))?;
        }
        Ok(out)
    }

    /// Total world trade `W = Σ w`, summed in edge order.
    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weights.w).sum()
    }

    /// Re-checks every structural invariant.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: alloc::string::String| Err(Error::InvalidNetwork(msg));
        if self.edges.is_empty() {
            return Err(Error::EmptyNetwork);
        }
        if self.nodes.windows(2).any(|w| w[0] >= w[1]) {
            return bad("node list is not strictly sorted".into());
        }
        let n = self.nodes.len();
        if self.edges.len() > n * (n - 1) / 2 {
            return bad(format!("{} edges exceed the simple-graph bound", self.edges.len()));
        }
        for pair in self.edges.windows(2) {
            if (pair[0].a, pair[0].b) >= (pair[1].a, pair[1].b) {
                return bad("edges are not strictly sorted".into());
            }
        }
        for e in &self.edges {
            if e.a >= e.b || e.b >= n {
                return bad(format!("edge ({}, {}) is not canonical", e.a, e.b));
            }
            let w = e.weights;
            if EdgeWeights::new(w.w_exp, w.w_imp) != Some(w) {
                return bad(format!("edge ({}, {}) violates w = w_exp + w_imp > 0", e.a, e.b));
            }
        }
        if let Some(i) = (0..n).find(|&i| self.adjacency[i].is_empty()) {
            return bad(format!("node {} has degree 0", self.nodes[i]));
        }
        Ok(())
    }

    /// Two dyadic records per link, one from each side, that rebuild this
    /// network exactly under either missing-flow policy.
    pub fn to_records(&self) -> Vec<DyadicRecord> {
        let mut out = Vec::with_capacity(2 * self.edges.len());
        for (a, b, w) in self.links() {
            out.push(DyadicRecord {
                year: self.year,
                reporter: a.clone(),
                partner: b.clone(),
                export_value: Some(w.w_exp),
                import_value: Some(w.w_imp),
            });
            out.push(DyadicRecord {
                year: self.year,
                reporter: b.clone(),
                partner: a.clone(),
                export_value: Some(w.w_imp),
                import_value: Some(w.w_exp),
            });
        }
        out
    }

    pub fn summarize(&self) -> NetworkSummary {
        let n = self.nodes.len();
        let l = self.edges.len();
        let total = self.total_weight();
        let w_max = self
            .edges
            .iter()
            .map(|e| e.weights.w)
            .fold(0.0_f64, f64::max);
        NetworkSummary {
            year: self.year,
            n,
            l,
            rho: l as f64 / (n as f64 * (n as f64 - 1.0) / 2.0),
            total_weight: total,
            mean_w: total / l as f64,
            w_max,
            w_max_over_total: w_max / total,
        }
    }
}

/// Whole-network statistics for one year.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkSummary {
    pub year: i32,
    pub n: usize,
    pub l: usize,
    /// `L / (N(N-1)/2)`
    pub rho: f64,
    /// `W`, million USD
    pub total_weight: f64,
    pub mean_w: f64,
    pub w_max: f64,
    pub w_max_over_total: f64,
}

/// Builds the network of `year` from paired flows. Pairs that symmetrize
/// to no edge are dropped, as are countries left without links.
pub fn build_network(
    pairs: &[PairedFlows],
    year: i32,
    policy: MissingFlowPolicy,
) -> Result<AnnualTradeNetwork> {
    let links = pairs
        .iter()
        .filter(|p| p.year == year)
        .filter_map(|p| {
            symmetrize(p, policy).map(|w| (p.country_a.clone(), p.country_b.clone(), w))
        });
    AnnualTradeNetwork::from_edges(year, links)
}
