//! Weight and degree distributions: log-binned densities, the power-law
//! slope of `Prob(w)`, log-normal moments with the parabola collapse, the
//! cumulative degree distribution, and log-log scaling regressions.
//!
//! The collapse maps a log-normal density onto `y = x²` with
//!
//! ```text
//! x = ln(w / w0)
//! y = -2σ² ln( Prob{ln w} · sqrt(2πσ²) )
//! ```
//!
//! where `w0 = exp(<ln w>)`, `σ² = <ln² w> - <ln w>²` and
//! `Prob{ln w} = w Prob(w)`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::network::AnnualTradeNetwork;
use crate::regression::{fit_line, LinearFit};
use crate::{Error, Result};

pub const DEFAULT_BINS_PER_DECADE: u32 = 10;
pub const DEFAULT_COLLAPSE_BIN_WIDTH: f64 = 0.25;
/// Central collapse region `|x| <= window · σ`.
pub const DEFAULT_COLLAPSE_WINDOW: f64 = 2.0;
/// Width in decades of the default power-law window.
pub const DEFAULT_FIT_DECADES: f64 = 2.5;

/// Histogram on geometric bins with densities per unit of the variable.
#[derive(Debug, Clone, PartialEq)]
pub struct LogHistogram {
    /// `len() == counts.len() + 1`, geometric progression.
    pub bin_edges: Vec<f64>,
    pub counts: Vec<usize>,
    pub densities: Vec<f64>,
}

impl LogHistogram {
    /// Assembles a histogram from precomputed densities, e.g. an exact
    /// analytic form. Counts are set to 1 wherever the density is positive.
    pub fn from_densities(bin_edges: Vec<f64>, densities: Vec<f64>) -> Result<Self> {
        if bin_edges.len() != densities.len() + 1 || densities.is_empty() {
            return Err(Error::domain("need one more edge than densities"));
        }
        if bin_edges[0] <= 0.0 || bin_edges.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("edges must be positive and increasing"));
        }
        let counts = densities.iter().map(|&d| usize::from(d > 0.0)).collect();
        Ok(LogHistogram {
            bin_edges,
            counts,
            densities,
        })
    }

    pub fn bin_count(&self) -> usize {
        self.counts.len()
    }

    pub fn width(&self, i: usize) -> f64 {
        self.bin_edges[i + 1] - self.bin_edges[i]
    }

    /// Geometric center of bin `i`.
    pub fn center(&self, i: usize) -> f64 {
        libm::sqrt(self.bin_edges[i] * self.bin_edges[i + 1])
    }

    /// `(center, density, count)` of every occupied bin.
    pub fn occupied(&self) -> impl Iterator<Item = (f64, f64, usize)> + '_ {
        (0..self.bin_count())
            .filter(|&i| self.counts[i] > 0 && self.densities[i] > 0.0)
            .map(|i| (self.center(i), self.densities[i], self.counts[i]))
    }

    /// `Σ density · width`; 1 for histograms built from samples.
    pub fn integral(&self) -> f64 {
        (0..self.bin_count())
            .map(|i| self.densities[i] * self.width(i))
            .sum()
    }
}

/// Geometric bins starting at `min(values)` with `bins_per_decade` bins per
/// factor of ten, the last bin containing `max(values)`.
pub fn log_histogram(values: &[f64], bins_per_decade: u32) -> Result<LogHistogram> {
    if values.is_empty() {
        return Err(Error::insufficient("values", 1, 0));
    }
    if bins_per_decade == 0 {
        return Err(Error::domain("bins_per_decade must be positive"));
    }
    if let Some(v) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::domain(alloc::format!(
            "histogram value {v} is not positive and finite"
        )));
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(0.0, f64::max);
    let b = bins_per_decade as f64;
    let edge = |i: usize| min * libm::pow(10.0, i as f64 / b);

    let mut nb = libm::floor(libm::log10(max / min) * b) as usize + 1;
    while edge(nb) <= max {
        nb += 1;
    }
    while nb > 1 && edge(nb - 1) > max {
        nb -= 1;
    }
    let bin_edges: Vec<f64> = (0..=nb).map(edge).collect();

    let mut counts = alloc::vec![0usize; nb];
    for &v in values {
        let mut i = (libm::floor(libm::log10(v / min) * b) as usize).min(nb - 1);
        while i > 0 && bin_edges[i] > v {
            i -= 1;
        }
        while i + 1 < nb && bin_edges[i + 1] <= v {
            i += 1;
        }
        counts[i] += 1;
    }
    let n = values.len() as f64;
    let densities = (0..nb)
        .map(|i| counts[i] as f64 / (n * (bin_edges[i + 1] - bin_edges[i])))
        .collect();
    Ok(LogHistogram {
        bin_edges,
        counts,
        densities,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    /// `Prob(w) ~ w^-tau`
    pub tau: f64,
    pub tau_stderr: f64,
    pub fit_range: (f64, f64),
    pub r_squared: f64,
    pub bins_used: usize,
}

/// Negated log-log slope of density over occupied bins whose center lies
/// in `[lo, hi]`.
pub fn fit_power_law(hist: &LogHistogram, range: (f64, f64)) -> Result<PowerLawFit> {
    let (lo, hi) = range;
    if !(lo > 0.0 && lo < hi) {
        return Err(Error::domain("fit range must satisfy 0 < lo < hi"));
    }
    let pts: Vec<(f64, f64)> = hist
        .occupied()
        .filter(|(c, _, _)| *c >= lo && *c <= hi)
        .map(|(c, d, _)| (libm::log10(c), libm::log10(d)))
        .collect();
    if pts.len() < 3 {
        return Err(Error::insufficient("occupied bins in fit range", 3, pts.len()));
    }
    let fit = fit_line(pts.iter().copied())?;
    Ok(PowerLawFit {
        tau: -fit.slope,
        tau_stderr: fit.slope_stderr,
        fit_range: range,
        r_squared: fit.r_squared,
        bins_used: pts.len(),
    })
}

/// Window of `decades` decades centered on the geometric mean of `values`.
pub fn centered_fit_range(values: &[f64], decades: f64) -> Result<(f64, f64)> {
    let (mean_ln, _) = ln_moments(values)?;
    let half = libm::pow(10.0, decades / 2.0);
    let center = libm::exp(mean_ln);
    Ok((center / half, center * half))
}

fn ln_moments(values: &[f64]) -> Result<(f64, f64)> {
    if values.is_empty() {
        return Err(Error::insufficient("values", 1, 0));
    }
    if values.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::domain("log-normal fit needs positive finite values"));
    }
    let n = values.len() as f64;
    let mean = values.iter().map(|v| libm::log(*v)).sum::<f64>() / n;
    let var = values
        .iter()
        .map(|v| {
            let d = libm::log(*v) - mean;
            d * d
        })
        .sum::<f64>()
        / n;
    Ok((mean, var))
}

/// Binning and central region of the collapse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollapseSpec {
    /// Bin width in `ln w`.
    pub bin_width: f64,
    /// Points with `|x| <= window · σ` make up the central region.
    pub window: f64,
}

impl Default for CollapseSpec {
    fn default() -> Self {
        CollapseSpec {
            bin_width: DEFAULT_COLLAPSE_BIN_WIDTH,
            window: DEFAULT_COLLAPSE_WINDOW,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogNormalFit {
    pub w0: f64,
    pub sigma: f64,
    /// Mean of `(y - x²)²` over the central region; NaN when no collapsed
    /// point falls inside it.
    pub collapse_mse: f64,
    /// Mean squared residual of the best straight line through the same
    /// points, i.e. what a power law achieves in collapse coordinates.
    /// NaN with fewer than 3 central points.
    pub power_law_mse: f64,
    pub n: usize,
}

impl LogNormalFit {
    /// Fitted log-normal density at `w`.
    pub fn pdf(&self, w: f64) -> f64 {
        lognormal_pdf(w, self.w0, self.sigma)
    }
}

/// `Prob(w) = exp(-ln²(w/w0) / 2σ²) / (w sqrt(2πσ²))`
pub fn lognormal_pdf(w: f64, w0: f64, sigma: f64) -> f64 {
    let l = libm::log(w / w0);
    libm::exp(-l * l / (2.0 * sigma * sigma)) / (w * libm::sqrt(2.0 * PI * sigma * sigma))
}

pub fn fit_lognormal(weights: &[f64], spec: CollapseSpec) -> Result<LogNormalFit> {
    let (mean_ln, var) = ln_moments(weights)?;
    let sigma = libm::sqrt(var);
    if !(sigma > 0.0) {
        return Err(Error::Degenerate("all weights equal, sigma = 0"));
    }
    let w0 = libm::exp(mean_ln);
    let points = collapse_transform(weights, w0, sigma, spec.bin_width)?;
    Ok(LogNormalFit {
        w0,
        sigma,
        collapse_mse: collapse_mse(&points, sigma, spec.window),
        power_law_mse: linear_collapse_mse(&points, sigma, spec.window)
            .map(|(_, mse)| mse)
            .unwrap_or(f64::NAN),
        n: weights.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollapsePoint {
    /// `ln(w_c / w0)` at the bin center.
    pub x: f64,
    pub y: f64,
    pub count: usize,
}

/// Collapse coordinates of densities `Prob{ln w}` given at `ln w` centers.
pub fn collapse_points(
    ln_centers: &[f64],
    ln_densities: &[f64],
    w0: f64,
    sigma: f64,
) -> Result<Vec<CollapsePoint>> {
    if !(sigma > 0.0) {
        return Err(Error::domain("sigma must be positive"));
    }
    let ln_w0 = libm::log(w0);
    let norm = libm::sqrt(2.0 * PI * sigma * sigma);
    Ok(ln_centers
        .iter()
        .zip(ln_densities)
        .filter(|(_, d)| **d > 0.0)
        .map(|(c, d)| CollapsePoint {
            x: c - ln_w0,
            y: -2.0 * sigma * sigma * libm::log(d * norm),
            count: 0,
        })
        .collect())
}

/// Histograms `ln w` on uniform bins of `bin_width` starting at `min ln w`
/// and maps each occupied bin to collapse coordinates.
pub fn collapse_transform(
    weights: &[f64],
    w0: f64,
    sigma: f64,
    bin_width: f64,
) -> Result<Vec<CollapsePoint>> {
    if !(sigma > 0.0) {
        return Err(Error::domain("sigma must be positive"));
    }
    if !(bin_width > 0.0) {
        return Err(Error::domain("collapse bin width must be positive"));
    }
    if weights.is_empty() {
        return Err(Error::insufficient("weights", 1, 0));
    }
    if weights.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::domain("collapse needs positive finite weights"));
    }
    let logs: Vec<f64> = weights.iter().map(|w| libm::log(*w)).collect();
    let lo = logs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let nb = libm::floor((hi - lo) / bin_width) as usize + 1;
    let mut counts = alloc::vec![0usize; nb];
    for l in &logs {
        let i = (libm::floor((l - lo) / bin_width) as usize).min(nb - 1);
        counts[i] += 1;
    }
    let n = weights.len() as f64;
    let centers: Vec<f64> = (0..nb).map(|i| lo + (i as f64 + 0.5) * bin_width).collect();
    let dens: Vec<f64> = counts.iter().map(|&c| c as f64 / (n * bin_width)).collect();
    let mut pts = collapse_points(&centers, &dens, w0, sigma)?;
    let occupied = counts.iter().copied().filter(|c| *c > 0);
    for (p, c) in pts.iter_mut().zip(occupied) {
        p.count = c;
    }
    Ok(pts)
}

fn central(points: &[CollapsePoint], sigma: f64, window: f64) -> impl Iterator<Item = &CollapsePoint> {
    let limit = window * sigma;
    points.iter().filter(move |p| libm::fabs(p.x) <= limit)
}

/// Mean of `(y - x²)²` over `|x| <= window · σ`; NaN if the region is empty.
pub fn collapse_mse(points: &[CollapsePoint], sigma: f64, window: f64) -> f64 {
    let (mut sum, mut n) = (0.0, 0usize);
    for p in central(points, sigma, window) {
        let r = p.y - p.x * p.x;
        sum += r * r;
        n += 1;
    }
    if n == 0 {
        f64::NAN
    } else {
        sum / n as f64
    }
}

/// Best straight line `y = a + b x` through the central points and its mean
/// squared residual. A power law `Prob(w) ~ w^-τ` is exactly such a line in
/// collapse coordinates.
pub fn linear_collapse_mse(
    points: &[CollapsePoint],
    sigma: f64,
    window: f64,
) -> Result<(LinearFit, f64)> {
    let pts: Vec<(f64, f64)> = central(points, sigma, window).map(|p| (p.x, p.y)).collect();
    if pts.len() < 3 {
        return Err(Error::insufficient("central collapse points", 3, pts.len()));
    }
    let fit = fit_line(pts.iter().copied())?;
    let mse = pts
        .iter()
        .map(|(x, y)| {
            let r = y - (fit.intercept + fit.slope * x);
            r * r
        })
        .sum::<f64>()
        / pts.len() as f64;
    Ok((fit, mse))
}

/// Inclusive survival function `P_>=(k)` over the distinct observed degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeSurvival {
    /// `(k, P_>=(k))`, increasing `k`.
    pub points: Vec<(usize, f64)>,
    pub samples: usize,
}

impl DegreeSurvival {
    pub fn from_degrees(degrees: &[usize]) -> Self {
        let mut sorted = degrees.to_vec();
        sorted.sort_unstable();
        let n = sorted.len();
        let mut points = Vec::new();
        let mut i = 0;
        while i < n {
            let k = sorted[i];
            points.push((k, (n - i) as f64 / n as f64));
            while i < n && sorted[i] == k {
                i += 1;
            }
        }
        DegreeSurvival { points, samples: n }
    }

    /// `P_>=(k)` for any `k`, observed or not.
    pub fn at(&self, k: usize) -> f64 {
        match self.points.iter().find(|(kk, _)| *kk >= k) {
            Some(&(_, p)) => p,
            None => 0.0,
        }
    }
}

pub fn degree_survival(nets: &[AnnualTradeNetwork]) -> DegreeSurvival {
    let degrees: Vec<usize> = nets
        .iter()
        .flat_map(|n| (0..n.node_count()).map(move |i| n.degree(i)))
        .collect();
    DegreeSurvival::from_degrees(&degrees)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeDistFit {
    pub survival: DegreeSurvival,
    /// From `P_>(k) ~ k^(1-γ)`: `γ = 1 - slope`.
    pub gamma: f64,
    pub gamma_stderr: f64,
    pub fit_range: (usize, usize),
}

/// Fits `γ` on a degree sample over distinct degrees in `[k_lo, k_hi]`.
pub fn fit_degree_exponent(degrees: &[usize], fit_range: (usize, usize)) -> Result<DegreeDistFit> {
    let survival = DegreeSurvival::from_degrees(degrees);
    let (lo, hi) = fit_range;
    let pts: Vec<(f64, f64)> = survival
        .points
        .iter()
        .filter(|(k, p)| *k >= lo.max(1) && *k <= hi && *p > 0.0)
        .map(|(k, p)| (libm::log(*k as f64), libm::log(*p)))
        .collect();
    if pts.len() < 3 {
        return Err(Error::insufficient("distinct degrees in fit range", 3, pts.len()));
    }
    let fit = fit_line(pts.iter().copied())?;
    Ok(DegreeDistFit {
        survival,
        gamma: 1.0 - fit.slope,
        gamma_stderr: fit.slope_stderr,
        fit_range,
    })
}

/// Pools node degrees over `nets` and fits `γ`.
pub fn degree_distribution(
    nets: &[AnnualTradeNetwork],
    fit_range: (usize, usize),
) -> Result<DegreeDistFit> {
    if nets.is_empty() {
        return Err(Error::insufficient("networks", 1, 0));
    }
    let degrees: Vec<usize> = nets
        .iter()
        .flat_map(|n| (0..n.node_count()).map(move |i| n.degree(i)))
        .collect();
    fit_degree_exponent(&degrees, fit_range)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    /// `value ~ prefactor · N^exponent`
    pub exponent: f64,
    pub prefactor: f64,
    pub exponent_stderr: f64,
    pub points: Vec<(f64, f64)>,
}

pub fn scaling_regression(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.len() < 3 {
        return Err(Error::insufficient("scaling points", 3, points.len()));
    }
    if points.iter().any(|(x, y)| !(*x > 0.0 && *y > 0.0)) {
        return Err(Error::domain("scaling regression needs positive points"));
    }
    let fit = fit_line(points.iter().map(|(x, y)| (libm::log(*x), libm::log(*y))))?;
    Ok(ScalingFit {
        exponent: fit.slope,
        prefactor: libm::exp(fit.intercept),
        exponent_stderr: fit.slope_stderr,
        points: points.to_vec(),
    })
}
