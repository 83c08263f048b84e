#![allow(dead_code)]

use std::collections::VecDeque;

use itn_core::network::{AnnualTradeNetwork, EdgeWeights};
use itn_core::CountryCode;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn code(i: usize) -> CountryCode {
    CountryCode::new(format!("N{i:03}"))
}

/// Random G(n, p) graph with log-uniform weights over six decades and a
/// random export share. Retries until at least one edge exists.
pub fn random_network(rng: &mut ChaCha8Rng, n: usize, p: f64) -> AnnualTradeNetwork {
    loop {
        let mut links = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random::<f64>() < p {
                    let w = 10f64.powf(rng.random_range(-2.0..4.0));
                    let share: f64 = rng.random();
                    let w_exp = share * w;
                    links.push((code(i), code(j), EdgeWeights::new(w_exp, w - w_exp).unwrap()));
                }
            }
        }
        if !links.is_empty() {
            return AnnualTradeNetwork::from_edges(2000, links).unwrap();
        }
    }
}

/// Largest component among `n` nodes given an edge list, by BFS.
pub fn bfs_largest(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut best = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        let mut size = 0;
        while let Some(u) = q.pop_front() {
            size += 1;
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    q.push_back(v);
                }
            }
        }
        best = best.max(size);
    }
    best
}

/// Samples from `p(w) ∝ w^-tau` on `[lo, hi]` by inverting the CDF.
pub fn power_law_samples(rng: &mut ChaCha8Rng, tau: f64, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let e = 1.0 - tau;
    let (a, b) = (lo.powf(e), hi.powf(e));
    (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            (a + u * (b - a)).powf(1.0 / e)
        })
        .collect()
}

/// Log-normal samples via Box-Muller.
pub fn lognormal_samples(rng: &mut ChaCha8Rng, w0: f64, sigma: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let u1: f64 = 1.0 - rng.random::<f64>();
            let u2: f64 = rng.random();
            let z = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
            w0 * (sigma * z).exp()
        })
        .collect()
}
