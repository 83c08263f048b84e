//! Seeded gravity-model generator for synthetic trade networks.
//!
//! Each country draws a log-normal GDP. Every pair gets a gravity score
//! `(GDP_i GDP_j)^c` and a weight `(GDP_i GDP_j)^c · ε` with multiplicative
//! log-normal noise `ε`. Each country keeps its top-scoring link, then the
//! top-scoring remaining pairs are added until the target link density is
//! reached. Each kept weight is split into export and import by a uniform
//! share.
//!
//! Links are chosen on the noise-free score, not on the noisy weight:
//! cutting on the weight itself truncates the lower tail of the weight
//! distribution, while cutting on the score leaves the kept weights close
//! to log-normal.
//!
//! The random source is ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64`, whose output stream is specified and platform
//! independent. Draws are consumed in a fixed order: all GDPs in country
//! order, then `(noise, share)` for every pair `i < j` in lexicographic
//! order.

use alloc::format;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::network::{AnnualTradeNetwork, EdgeWeights};
use crate::records::CountryCode;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GravityParams {
    pub n_countries: usize,
    /// Mean of `ln GDP`.
    pub gdp_logmean: f64,
    /// Standard deviation of `ln GDP`.
    pub gdp_logsd: f64,
    /// Exponent `c` of the GDP product in the weight law.
    pub coupling_exponent: f64,
    pub link_density_target: f64,
    /// Standard deviation of `ln ε`.
    pub noise_logsd: f64,
    pub seed: u64,
}

impl Default for GravityParams {
    fn default() -> Self {
        GravityParams {
            n_countries: 150,
            gdp_logmean: 5.0,
            gdp_logsd: 1.5,
            coupling_exponent: 1.0,
            link_density_target: 0.5,
            noise_logsd: 1.0,
            seed: 1,
        }
    }
}

impl GravityParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_countries < 2 {
            return Err(Error::domain("n_countries must be at least 2"));
        }
        if self.link_density_target == 0.0 {
            return Err(Error::EmptyNetwork);
        }
        if !(self.link_density_target > 0.0 && self.link_density_target <= 1.0) {
            return Err(Error::domain("link_density_target must lie in (0, 1]"));
        }
        if !(self.gdp_logsd > 0.0 && self.gdp_logsd.is_finite()) {
            return Err(Error::domain("gdp_logsd must be positive"));
        }
        if !(self.noise_logsd >= 0.0 && self.noise_logsd.is_finite()) {
            return Err(Error::domain("noise_logsd must be non-negative"));
        }
        if !self.gdp_logmean.is_finite() || !self.coupling_exponent.is_finite() {
            return Err(Error::domain("gdp_logmean and coupling_exponent must be finite"));
        }
        Ok(())
    }

    /// Links requested by the density target. The generator may keep more
    /// when the per-country heaviest links alone exceed it.
    pub fn target_links(&self) -> usize {
        let pairs = self.n_countries * (self.n_countries - 1) / 2;
        (libm::round(self.link_density_target * pairs as f64) as usize).clamp(1, pairs)
    }
}

/// A generated network together with the GDP draws behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticNetwork {
    pub network: AnnualTradeNetwork,
    /// GDP of each node, in node order.
    pub gdp: Vec<f64>,
}

/// `C000`, `C001`, ... zero-padded so string order equals index order.
pub fn country_code(i: usize, n: usize) -> CountryCode {
    let mut width = 3;
    let mut m = n.saturating_sub(1);
    let mut digits = 1;
    while m >= 10 {
        m /= 10;
        digits += 1;
    }
    if digits > width {
        width = digits;
    }
    CountryCode::new(format!("C{i:0width$}"))
}

pub fn generate(params: &GravityParams, year: i32) -> Result<SyntheticNetwork> {
    params.validate()?;
    let n = params.n_countries;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let gdp_dist = Normal::new(params.gdp_logmean, params.gdp_logsd)
        .map_err(|e| Error::domain(format!("{e}")))?;
    let noise_dist =
        Normal::new(0.0, params.noise_logsd).map_err(|e| Error::domain(format!("{e}")))?;

    let ln_gdp: Vec<f64> = (0..n).map(|_| gdp_dist.sample(&mut rng)).collect();

    struct Candidate {
        i: usize,
        j: usize,
        ln_score: f64,
        noise: f64,
        share: f64,
    }
    let mut cand = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let noise = noise_dist.sample(&mut rng);
            let share: f64 = rng.random();
            cand.push(Candidate {
                i,
                j,
                ln_score: params.coupling_exponent * (ln_gdp[i] + ln_gdp[j]),
                noise,
                share,
            });
        }
    }

    let mut keep = alloc::vec![false; cand.len()];
    let mut best: Vec<Option<usize>> = alloc::vec![None; n];
    for (p, c) in cand.iter().enumerate() {
        for node in [c.i, c.j] {
            if best[node].is_none_or(|b| cand[b].ln_score < c.ln_score) {
                best[node] = Some(p);
            }
        }
    }
    let mut kept = 0;
    for p in best.into_iter().flatten() {
        if !keep[p] {
            keep[p] = true;
            kept += 1;
        }
    }
    let mut order: Vec<usize> = (0..cand.len()).collect();
    order.sort_by(|&x, &y| cand[y].ln_score.total_cmp(&cand[x].ln_score).then(x.cmp(&y)));
    let target = params.target_links();
    for p in order {
        if kept >= target {
            break;
        }
        if !keep[p] {
            keep[p] = true;
            kept += 1;
        }
    }

    let mut links = Vec::with_capacity(kept);
    for (c, _) in cand.iter().zip(&keep).filter(|(_, k)| **k) {
        let w = libm::exp(c.ln_score + c.noise);
        let w_exp = c.share * w;
        let w_imp = w - w_exp;
        let weights = EdgeWeights::new(w_exp, w_imp).ok_or_else(|| {
            Error::domain(format!("generated weight {w} is out of the representable range"))
        })?;
        links.push((country_code(c.i, n), country_code(c.j, n), weights));
    }
    let network = AnnualTradeNetwork::from_edges(year, links)?;
    let gdp = ln_gdp.iter().map(|l| libm::exp(*l)).collect();
    Ok(SyntheticNetwork { network, gdp })
}

pub fn generate_network(params: &GravityParams, year: i32) -> Result<AnnualTradeNetwork> {
    generate(params, year).map(|s| s.network)
}

/// Per-year growth factors applied to the base parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelGrowth {
    /// `n(t) = round(n0 · n_multiplier^t)`
    pub n_multiplier: f64,
    /// GDP scale after `t` years is `gdp_multiplier^t`.
    pub gdp_multiplier: f64,
}

impl Default for PanelGrowth {
    fn default() -> Self {
        PanelGrowth {
            n_multiplier: 1.0,
            gdp_multiplier: 1.0,
        }
    }
}

impl PanelGrowth {
    /// Geometric schedule taking `n_start` to `n_end` and GDP scale by
    /// `gdp_factor` over `years` yearly networks.
    pub fn from_endpoints(n_start: usize, n_end: usize, gdp_factor: f64, years: usize) -> Self {
        let steps = years.saturating_sub(1).max(1) as f64;
        PanelGrowth {
            n_multiplier: libm::pow(n_end as f64 / n_start as f64, 1.0 / steps),
            gdp_multiplier: libm::pow(gdp_factor, 1.0 / steps),
        }
    }
}

/// SplitMix64 finalizer applied to `seed + year`.
pub fn year_seed(seed: u64, year: i32) -> u64 {
    let mut z = seed.wrapping_add(year as i64 as u64).wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Parameters of the `t`-th year of a panel.
pub fn panel_params(
    base: &GravityParams,
    growth: PanelGrowth,
    t: usize,
    year: i32,
) -> Result<GravityParams> {
    let n = libm::round(base.n_countries as f64 * libm::pow(growth.n_multiplier, t as f64));
    if !(n >= 2.0 && n.is_finite()) {
        return Err(Error::domain(format!(
            "panel schedule shrinks n_countries to {n} in {year}"
        )));
    }
    if !(growth.gdp_multiplier > 0.0) {
        return Err(Error::domain("gdp_multiplier must be positive"));
    }
    Ok(GravityParams {
        n_countries: n as usize,
        gdp_logmean: base.gdp_logmean + t as f64 * libm::log(growth.gdp_multiplier),
        seed: year_seed(base.seed, year),
        ..*base
    })
}

pub fn generate_panel(
    base: &GravityParams,
    years: RangeInclusive<i32>,
    growth: PanelGrowth,
) -> Result<Vec<AnnualTradeNetwork>> {
    if years.is_empty() {
        return Err(Error::insufficient("panel years", 1, 0));
    }
    let years: Vec<i32> = years.collect();
    let params: Vec<GravityParams> = years
        .iter()
        .enumerate()
        .map(|(t, &y)| panel_params(base, growth, t, y))
        .collect::<Result<_>>()?;
    params
        .iter()
        .zip(&years)
        .map(|(p, &y)| generate_network(p, y))
        .collect()
}
