//! Command-line front end.
//!
//! Every command reads dyadic record files and/or JSON snapshots, runs one
//! analysis per selected year on a worker pool, writes each result as
//! `<year>_<analysis>.<ext>` and finishes with `manifest.json`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use itn_core::distributions::{
    centered_fit_range, collapse_transform, degree_distribution, fit_lognormal, fit_power_law,
    log_histogram, scaling_regression, CollapseSpec, DEFAULT_BINS_PER_DECADE,
    DEFAULT_COLLAPSE_BIN_WIDTH, DEFAULT_COLLAPSE_WINDOW, DEFAULT_FIT_DECADES,
};
use itn_core::metrics::{disparity_curve, LogBinSpec};
use itn_core::network::MissingFlowPolicy;
use itn_core::percolation::{fit_exponential_approach, percolate, InsertionOrder};
use itn_core::richclub::{rich_club_curve, rich_club_size, RichClubEntry, DEFAULT_THRESHOLD};
use itn_core::synth::{generate_network, panel_params, GravityParams, PanelGrowth};
use itn_core::{AnnualTradeNetwork, DuplicatePolicy, FlowKind};
use rayon::prelude::*;
use serde::Serialize;

use crate::ingest::{networks_by_year, read_records_file, write_records, BuildOptions, RecordFormat};
use crate::output::{Artifact, Manifest, OutputFormat, Sink, Table, YearError, Years};
use crate::snapshot::{read_snapshot_file, write_snapshots};
use crate::tables::{self, PanelRow};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "itn", version, about = "Annual trade networks from dyadic records, and their statistics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Size, density and trade volume of each year's network
    Summary(SummaryArgs),
    /// Per-country degree, strength and disparity, plus the binned kY(k) curve
    Metrics(MetricsArgs),
    /// Power-law and log-normal fits of the link-weight distribution
    Fit(FitArgs),
    /// Giant-component growth as links are inserted by weight
    Percolate(PercolateArgs),
    /// Rich-club curve per year and the club-size series
    Richclub(RichclubArgs),
    /// Generate gravity-model networks
    Synth(SynthArgs),
    /// Year-by-year series and cross-year scaling laws
    Panel(PanelArgs),
    /// Summary, metrics, disparity, fit, percolation and rich club for every year
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormatArg {
    Csv,
    Tsv,
}

impl From<FormatArg> for RecordFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => RecordFormat::Csv,
            FormatArg::Tsv => RecordFormat::Tsv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DuplicateArg {
    Mean,
    First,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MissingArg {
    /// A missing mirror report counts as zero
    Zero,
    /// A missing mirror report copies the one present
    Copy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FlowArg {
    Total,
    Export,
    Import,
    All,
}

impl FlowArg {
    fn kinds(self) -> Vec<FlowKind> {
        match self {
            FlowArg::Total => vec![FlowKind::Total],
            FlowArg::Export => vec![FlowKind::Export],
            FlowArg::Import => vec![FlowKind::Import],
            FlowArg::All => vec![FlowKind::Total, FlowKind::Export, FlowKind::Import],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderArg {
    /// Heaviest link first
    Desc,
    /// Lightest link first
    Asc,
    Both,
}

impl OrderArg {
    fn orders(self) -> Vec<InsertionOrder> {
        match self {
            OrderArg::Desc => vec![InsertionOrder::Descending],
            OrderArg::Asc => vec![InsertionOrder::Ascending],
            OrderArg::Both => vec![InsertionOrder::Descending, InsertionOrder::Ascending],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EmitArg {
    Snapshot,
    Records,
    Both,
}

fn parse_year_range(s: &str) -> std::result::Result<(i32, i32), String> {
    let year = |t: &str| t.trim().parse::<i32>().map_err(|_| format!("{t:?} is not a year"));
    // a leading minus belongs to the first year, not to the separator
    match s.get(1..).and_then(|rest| rest.find('-')).map(|i| i + 1) {
        Some(i) => {
            let (a, b) = (year(&s[..i])?, year(&s[i + 1..])?);
            if a > b {
                return Err(format!("range {s} is empty"));
            }
            Ok((a, b))
        }
        None => year(s).map(|y| (y, y)),
    }
}

fn parse_pair<T: std::str::FromStr>(s: &str) -> std::result::Result<(T, T), String> {
    let (a, b) = s
        .split_once(':')
        .or_else(|| s.split_once(','))
        .ok_or_else(|| format!("expected LO:HI, got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<T>().map_err(|_| format!("{t:?} is not a number"));
    Ok((parse(a)?, parse(b)?))
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InputArgs {
    /// Dyadic record files, or network snapshots when the name ends in .json
    #[arg(value_name = "INPUT")]
    pub inputs: Vec<PathBuf>,
    /// Delimiter of record files
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    /// How repeated reports of the same flow are merged
    #[arg(long, value_enum, default_value_t = DuplicateArg::Mean)]
    pub on_duplicate: DuplicateArg,
    /// How a one-sided report enters the pair average
    #[arg(long, value_enum, default_value_t = MissingArg::Zero)]
    pub missing: MissingArg,
    /// Year to analyze, or FIRST-LAST; repeatable. A single year absent
    /// from the input is reported as an error; ranges only filter.
    #[arg(long = "year", value_name = "YEAR", value_parser = parse_year_range)]
    pub years: Vec<(i32, i32)>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Directory for result files
    #[arg(long, env = "ITN_OUT_DIR", default_value = ".")]
    #[serde(skip)]
    pub out_dir: PathBuf,
    /// Format of result tables
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub output_format: OutputFormat,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SummaryArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MetricsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Flow kind for strength and disparity
    #[arg(long, value_enum, default_value_t = FlowArg::All)]
    pub flow: FlowArg,
    /// Degree bins per decade for the kY(k) curve
    #[arg(long, default_value_t = LogBinSpec::default().bins_per_decade)]
    pub bins_per_decade: u32,
    /// Bins with fewer nodes are reported but not fitted
    #[arg(long, default_value_t = LogBinSpec::default().min_occupancy)]
    pub min_occupancy: usize,
    /// Also fit one curve pooled over all selected years
    #[arg(long)]
    pub pool: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FitOpts {
    /// Weight-histogram bins per decade
    #[arg(long, default_value_t = DEFAULT_BINS_PER_DECADE)]
    pub bins_per_decade: u32,
    /// Power-law fit window LO:HI in weight units [default: centered window]
    #[arg(long, value_parser = parse_pair::<f64>)]
    pub fit_range: Option<(f64, f64)>,
    /// Width in decades of the centered window used without --fit-range
    #[arg(long, default_value_t = DEFAULT_FIT_DECADES)]
    pub fit_decades: f64,
    /// Central collapse region |x| <= window·σ
    #[arg(long, default_value_t = DEFAULT_COLLAPSE_WINDOW)]
    pub collapse_window: f64,
    /// Bin width of the collapse histogram in ln w
    #[arg(long, default_value_t = DEFAULT_COLLAPSE_BIN_WIDTH)]
    pub collapse_bin_width: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FitArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub fit: FitOpts,
    /// Fit a plain list of weights, one per line, instead of networks
    #[arg(long, conflicts_with = "inputs")]
    pub weights: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PercolationOpts {
    /// Insertion order
    #[arg(long, value_enum, default_value_t = OrderArg::Both)]
    pub order: OrderArg,
    /// Write every n-th point of each curve; the last point is always kept
    #[arg(long, default_value_t = 1)]
    pub emit_every: usize,
    /// Fit 1 - S_g/N ~ exp(-rate·f) over F_LO:F_HI
    #[arg(long, value_parser = parse_pair::<f64>)]
    pub exp_fit_range: Option<(f64, f64)>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PercolateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub percolation: PercolationOpts,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RichclubArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Share of world trade the club must hold, in (0, 1)
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SynthArgs {
    #[command(flatten)]
    pub output: OutputArgs,
    /// Countries in the first year
    #[arg(long, default_value_t = GravityParams::default().n_countries)]
    pub n_countries: usize,
    /// Mean of ln GDP in the first year
    #[arg(long, default_value_t = GravityParams::default().gdp_logmean, allow_negative_numbers = true)]
    pub gdp_logmean: f64,
    /// Standard deviation of ln GDP
    #[arg(long, default_value_t = GravityParams::default().gdp_logsd)]
    pub gdp_logsd: f64,
    /// Exponent of the GDP product in the weight law
    #[arg(long, default_value_t = GravityParams::default().coupling_exponent, allow_negative_numbers = true)]
    pub coupling_exponent: f64,
    /// Target share of country pairs that trade, in (0, 1]
    #[arg(long, default_value_t = GravityParams::default().link_density_target)]
    pub link_density: f64,
    /// Standard deviation of the log-normal weight noise
    #[arg(long, default_value_t = GravityParams::default().noise_logsd)]
    pub noise_logsd: f64,
    #[arg(long, default_value_t = GravityParams::default().seed)]
    pub seed: u64,
    /// First (or only) year
    #[arg(long, default_value_t = 2000, allow_negative_numbers = true)]
    pub year: i32,
    /// Last year of a panel
    #[arg(long, allow_negative_numbers = true)]
    pub last_year: Option<i32>,
    /// Countries in the last year of a panel [default: --n-countries]
    #[arg(long)]
    pub n_end: Option<usize>,
    /// GDP scale of the last year relative to the first
    #[arg(long, default_value_t = 1.0)]
    pub gdp_factor: f64,
    /// What to write
    #[arg(long, value_enum, default_value_t = EmitArg::Both)]
    pub emit: EmitArg,
    /// Delimiter of the record file
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub record_format: FormatArg,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PanelArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Rich-club threshold, in (0, 1)
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: f64,
    /// Also pool degrees over the panel and fit γ over K_LO:K_HI
    #[arg(long, value_parser = parse_pair::<usize>)]
    pub degree_fit_range: Option<(usize, usize)>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Degree bins per decade for the kY(k) curve
    #[arg(long, default_value_t = LogBinSpec::default().bins_per_decade)]
    pub disparity_bins_per_decade: u32,
    /// Degree bins with fewer nodes are reported but not fitted
    #[arg(long, default_value_t = LogBinSpec::default().min_occupancy)]
    pub min_occupancy: usize,
    #[command(flatten)]
    pub fit: FitOpts,
    #[command(flatten)]
    pub percolation: PercolationOpts,
    /// Rich-club threshold, in (0, 1)
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: f64,
}

/// Networks selected for a run plus the years that could not be built.
#[derive(Debug, Default)]
pub struct Dataset {
    pub nets: Vec<AnnualTradeNetwork>,
    pub errors: Vec<YearError>,
    pub years: Vec<i32>,
}

impl InputArgs {
    fn build_options(&self) -> BuildOptions {
        BuildOptions {
            on_duplicate: match self.on_duplicate {
                DuplicateArg::Mean => DuplicatePolicy::Mean,
                DuplicateArg::First => DuplicatePolicy::First,
                DuplicateArg::Max => DuplicatePolicy::Max,
            },
            missing: match self.missing {
                MissingArg::Zero => MissingFlowPolicy::Zero,
                MissingArg::Copy => MissingFlowPolicy::Copy,
            },
        }
    }

    fn is_snapshot(path: &Path) -> bool {
        path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
    }

    pub fn load(&self) -> Result<Dataset> {
        if self.inputs.is_empty() {
            return Err(Error::Config("no input files given".into()));
        }
        let mut records = Vec::new();
        let mut snapshots: BTreeMap<i32, AnnualTradeNetwork> = BTreeMap::new();
        for path in &self.inputs {
            if Self::is_snapshot(path) {
                for net in read_snapshot_file(path)? {
                    let year = net.year();
                    if snapshots.insert(year, net).is_some() {
                        return Err(Error::Config(format!("year {year} appears in more than one snapshot")));
                    }
                }
            } else {
                records.extend(read_records_file(path, self.format.into())?);
            }
        }
        let mut built = networks_by_year(&records, self.build_options());
        for (year, net) in snapshots {
            if built.insert(year, Ok(net)).is_some() {
                return Err(Error::Config(format!(
                    "year {year} is given both as records and as a snapshot"
                )));
            }
        }

        let mut data = Dataset::default();
        let wanted = |y: i32| self.years.is_empty() || self.years.iter().any(|&(a, b)| a <= y && y <= b);
        let singles: BTreeSet<i32> = self.years.iter().filter(|(a, b)| a == b).map(|p| p.0).collect();
        for y in singles.iter().filter(|y| !built.contains_key(y)) {
            data.errors.push(YearError {
                year: *y,
                message: "no records for this year".into(),
            });
        }
        for (year, net) in built.into_iter().filter(|(y, _)| wanted(*y)) {
            match net {
                Ok(net) => {
                    data.years.push(year);
                    data.nets.push(net);
                }
                Err(e) => data.errors.push(YearError {
                    year,
                    message: e.to_string(),
                }),
            }
        }
        data.errors.sort_by_key(|e| e.year);
        Ok(data)
    }
}

impl OutputArgs {
    fn sink(&self) -> Result<Sink> {
        std::fs::create_dir_all(&self.out_dir).map_err(|e| Error::io(&self.out_dir, e))?;
        Ok(Sink {
            dir: self.out_dir.clone(),
            format: self.output_format,
        })
    }
}

/// Tables and analysis failures of one year.
#[derive(Debug, Default)]
struct YearReport {
    tables: Vec<(&'static str, Table)>,
    errors: Vec<String>,
}

impl YearReport {
    fn table(&mut self, analysis: &'static str, t: Table) {
        self.tables.push((analysis, t));
    }

    fn fail(&mut self, analysis: &str, e: impl std::fmt::Display) {
        self.errors.push(format!("{analysis}: {e}"));
    }
}

/// Runs `f` on every network in parallel and writes its tables.
/// Artifacts and errors come back in year order.
fn per_year<F>(data: &Dataset, sink: &Sink, f: F) -> Result<(Vec<Artifact>, Vec<YearError>)>
where
    F: Fn(&AnnualTradeNetwork, &mut YearReport) + Sync,
{
    let reports: Vec<Result<(Vec<Artifact>, Vec<YearError>)>> = data
        .nets
        .par_iter()
        .map(|net| {
            let mut report = YearReport::default();
            f(net, &mut report);
            let years = Some(Years::One(net.year()));
            let artifacts = report
                .tables
                .iter()
                .map(|(name, t)| sink.table(years, name, t))
                .collect::<Result<Vec<_>>>()?;
            let errors = report
                .errors
                .into_iter()
                .map(|message| YearError {
                    year: net.year(),
                    message,
                })
                .collect();
            Ok((artifacts, errors))
        })
        .collect();
    let mut artifacts = Vec::new();
    let mut errors = Vec::new();
    for r in reports {
        let (a, e) = r?;
        artifacts.extend(a);
        errors.extend(e);
    }
    Ok((artifacts, errors))
}

/// Result of a run that got as far as writing its manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub manifest: Manifest,
    pub manifest_path: PathBuf,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        if self.manifest.errors.is_empty() {
            0
        } else {
            1
        }
    }
}

fn finish(
    command: &'static str,
    params: &impl Serialize,
    sink: &Sink,
    years: Vec<i32>,
    artifacts: Vec<Artifact>,
    mut errors: Vec<YearError>,
) -> Result<Outcome> {
    errors.sort_by_key(|e| e.year);
    let mut manifest = Manifest::new(command, serde_json::to_value(params)?);
    manifest.years = years;
    manifest.artifacts = artifacts;
    manifest.errors = errors;
    let manifest_path = manifest.write(&sink.dir)?;
    Ok(Outcome {
        manifest,
        manifest_path,
    })
}

fn check_threshold(t: f64) -> Result<()> {
    if t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("threshold {t} must lie in (0, 1)")))
    }
}

impl FitOpts {
    fn validate(&self) -> Result<()> {
        if self.bins_per_decade == 0 {
            return Err(Error::Config("--bins-per-decade must be positive".into()));
        }
        if let Some((lo, hi)) = self.fit_range {
            if !(lo > 0.0 && lo < hi && hi.is_finite()) {
                return Err(Error::Config("--fit-range needs 0 < LO < HI".into()));
            }
        }
        if !(self.fit_decades > 0.0 && self.fit_decades.is_finite()) {
            return Err(Error::Config("--fit-decades must be positive".into()));
        }
        if !(self.collapse_window > 0.0 && self.collapse_window.is_finite()) {
            return Err(Error::Config("--collapse-window must be positive".into()));
        }
        if !(self.collapse_bin_width > 0.0 && self.collapse_bin_width.is_finite()) {
            return Err(Error::Config("--collapse-bin-width must be positive".into()));
        }
        Ok(())
    }

    fn spec(&self) -> CollapseSpec {
        CollapseSpec {
            bin_width: self.collapse_bin_width,
            window: self.collapse_window,
        }
    }

    /// Fit table, plus histogram and collapse tables when `curves` is set.
    fn run(&self, weights: &[f64], curves: bool, report: &mut YearReport) {
        let hist = match log_histogram(weights, self.bins_per_decade) {
            Ok(h) => Some(h),
            Err(e) => {
                report.fail("histogram", e);
                None
            }
        };
        let range = match self.fit_range {
            Some(r) => Ok(r),
            None => centered_fit_range(weights, self.fit_decades),
        };
        let power = match (&hist, range) {
            (Some(h), Ok(r)) => fit_power_law(h, r).map_err(|e| report.fail("power-law fit", e)).ok(),
            (_, Err(e)) => {
                report.fail("power-law fit", e);
                None
            }
            (None, _) => None,
        };
        let lognormal = fit_lognormal(weights, self.spec())
            .map_err(|e| report.fail("log-normal fit", e))
            .ok();
        report.table("fit", tables::weight_fit(weights.len(), power.as_ref(), lognormal.as_ref()));
        if !curves {
            return;
        }
        if let Some(h) = &hist {
            report.table("histogram", tables::histogram(h));
        }
        if let Some(l) = &lognormal {
            match collapse_transform(weights, l.w0, l.sigma, self.collapse_bin_width) {
                Ok(pts) => report.table("collapse", tables::collapse(&pts)),
                Err(e) => report.fail("collapse", e),
            }
        }
    }
}

impl PercolationOpts {
    fn validate(&self) -> Result<()> {
        if self.emit_every == 0 {
            return Err(Error::Config("--emit-every must be at least 1".into()));
        }
        if let Some((lo, hi)) = self.exp_fit_range {
            if !(lo <= hi) {
                return Err(Error::Config("--exp-fit-range needs F_LO <= F_HI".into()));
            }
        }
        Ok(())
    }

    fn run(&self, net: &AnnualTradeNetwork, report: &mut YearReport) {
        let curves: Vec<_> = self.order.orders().into_iter().map(|o| percolate(net, o)).collect();
        report.table("percolation", tables::percolation(&curves, self.emit_every));
        if let Some(range) = self.exp_fit_range {
            let mut fits = Vec::new();
            for c in &curves {
                match fit_exponential_approach(&c.points, range) {
                    Ok(f) => fits.push((c.order, f)),
                    Err(e) => report.fail(&format!("percolation fit ({})", tables::order_name(c.order)), e),
                }
            }
            report.table("percolation_fit", tables::percolation_fit(&fits));
        }
    }
}

fn weights_of(net: &AnnualTradeNetwork) -> Vec<f64> {
    net.edges().iter().map(|e| e.weights.w).collect()
}

fn disparity_tables(
    nets: &[AnnualTradeNetwork],
    flows: &[FlowKind],
    spec: LogBinSpec,
    report: &mut YearReport,
) -> Table {
    let mut curves = Vec::new();
    for &flow in flows {
        match disparity_curve(nets, flow, spec) {
            Ok(c) => curves.push(c),
            Err(e) => report.fail(&format!("disparity ({})", tables::flow_name(flow)), e),
        }
    }
    tables::disparity(&curves)
}

fn read_weight_list(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| {
            Error::Parse {
                line: i as u64 + 1,
                message: format!("{line:?} is not a number"),
            }
            .in_file(path)
        })?;
        out.push(v);
    }
    Ok(out)
}

pub fn run_summary(args: &SummaryArgs) -> Result<Outcome> {
    let data = args.input.load()?;
    let sink = args.output.sink()?;
    let (artifacts, mut errors) = per_year(&data, &sink, |net, r| {
        r.table("summary", tables::summary(&[net.summarize()]));
    })?;
    errors.extend(data.errors.iter().cloned());
    finish("summary", args, &sink, data.years, artifacts, errors)
}

pub fn run_metrics(args: &MetricsArgs) -> Result<Outcome> {
    if args.bins_per_decade == 0 {
        return Err(Error::Config("--bins-per-decade must be positive".into()));
    }
    let data = args.input.load()?;
    let sink = args.output.sink()?;
    let flows = args.flow.kinds();
    let spec = LogBinSpec {
        bins_per_decade: args.bins_per_decade,
        min_occupancy: args.min_occupancy,
    };
    let (mut artifacts, mut errors) = per_year(&data, &sink, |net, r| {
        let mut t = tables::node_metrics(net, flows[0]);
        for &flow in &flows[1..] {
            t.rows.extend(tables::node_metrics(net, flow).rows);
        }
        r.table("metrics", t);
        let d = disparity_tables(std::slice::from_ref(net), &flows, spec, r);
        r.table("disparity", d);
    })?;
    if args.pool && !data.nets.is_empty() {
        let mut report = YearReport::default();
        let t = disparity_tables(&data.nets, &flows, spec, &mut report);
        artifacts.push(sink.table(Years::span(&data.years), "disparity_pooled", &t)?);
        let first = data.years[0];
        errors.extend(report.errors.into_iter().map(|message| YearError { year: first, message }));
    }
    errors.extend(data.errors.iter().cloned());
    finish("metrics", args, &sink, data.years, artifacts, errors)
}

pub fn run_fit(args: &FitArgs) -> Result<Outcome> {
    args.fit.validate()?;
    let sink = args.output.sink()?;
    if let Some(path) = &args.weights {
        let weights = read_weight_list(path)?;
        let mut report = YearReport::default();
        args.fit.run(&weights, true, &mut report);
        let artifacts = report
            .tables
            .iter()
            .map(|(name, t)| sink.table(None, name, t))
            .collect::<Result<Vec<_>>>()?;
        if !report.errors.is_empty() {
            return Err(Error::Config(report.errors.join("; ")));
        }
        return finish("fit", args, &sink, Vec::new(), artifacts, Vec::new());
    }
    let data = args.input.load()?;
    let (artifacts, mut errors) = per_year(&data, &sink, |net, r| {
        args.fit.run(&weights_of(net), true, r);
    })?;
    errors.extend(data.errors.iter().cloned());
    finish("fit", args, &sink, data.years, artifacts, errors)
}

pub fn run_percolate(args: &PercolateArgs) -> Result<Outcome> {
    args.percolation.validate()?;
    let data = args.input.load()?;
    let sink = args.output.sink()?;
    let (artifacts, mut errors) = per_year(&data, &sink, |net, r| args.percolation.run(net, r))?;
    errors.extend(data.errors.iter().cloned());
    finish("percolate", args, &sink, data.years, artifacts, errors)
}

fn club_entry(net: &AnnualTradeNetwork, threshold: f64) -> itn_core::Result<(RichClubEntry, Table)> {
    let curve = rich_club_curve(net);
    let size = rich_club_size(&curve, net, threshold)?;
    let entry = RichClubEntry {
        year: net.year(),
        s_rc: size.fraction,
        club_size: size.club_size,
        n: net.node_count(),
    };
    Ok((entry, tables::richclub(net, &curve)))
}

pub fn run_richclub(args: &RichclubArgs) -> Result<Outcome> {
    check_threshold(args.threshold)?;
    let data = args.input.load()?;
    let sink = args.output.sink()?;
    let (mut artifacts, mut errors) = per_year(&data, &sink, |net, r| match club_entry(net, args.threshold) {
        Ok((_, t)) => r.table("richclub", t),
        Err(e) => r.fail("richclub", e),
    })?;
    let entries: Vec<RichClubEntry> = data
        .nets
        .par_iter()
        .filter_map(|net| club_entry(net, args.threshold).ok().map(|(e, _)| e))
        .collect();
    if let Some(span) = Years::span(&data.years) {
        artifacts.push(sink.table(Some(span), "richclub_series", &tables::richclub_series(&entries))?);
    }
    errors.extend(data.errors.iter().cloned());
    finish("richclub", args, &sink, data.years, artifacts, errors)
}

impl SynthArgs {
    pub fn params(&self) -> GravityParams {
        GravityParams {
            n_countries: self.n_countries,
            gdp_logmean: self.gdp_logmean,
            gdp_logsd: self.gdp_logsd,
            coupling_exponent: self.coupling_exponent,
            link_density_target: self.link_density,
            noise_logsd: self.noise_logsd,
            seed: self.seed,
        }
    }

    pub fn years(&self) -> Result<Vec<i32>> {
        let last = self.last_year.unwrap_or(self.year);
        if last < self.year {
            return Err(Error::Config(format!("--last-year {last} is before --year {}", self.year)));
        }
        Ok((self.year..=last).collect())
    }

    pub fn growth(&self, years: usize) -> PanelGrowth {
        PanelGrowth::from_endpoints(
            self.n_countries,
            self.n_end.unwrap_or(self.n_countries),
            self.gdp_factor,
            years,
        )
    }
}

pub fn run_synth(args: &SynthArgs) -> Result<Outcome> {
    let base = args.params();
    base.validate().map_err(|e| Error::Config(e.to_string()))?;
    if !(args.gdp_factor > 0.0 && args.gdp_factor.is_finite()) {
        return Err(Error::Config("--gdp-factor must be positive".into()));
    }
    let years = args.years()?;
    let growth = args.growth(years.len());
    let params: Vec<GravityParams> = years
        .iter()
        .enumerate()
        .map(|(t, &y)| panel_params(&base, growth, t, y))
        .collect::<itn_core::Result<_>>()
        .map_err(|e| Error::Config(e.to_string()))?;
    let nets: Vec<AnnualTradeNetwork> = params
        .par_iter()
        .zip(&years)
        .map(|(p, &y)| generate_network(p, y))
        .collect::<itn_core::Result<_>>()
        .map_err(|e| Error::Config(e.to_string()))?;

    let sink = args.output.sink()?;
    let span = Years::span(&years).expect("at least one year");
    let mut artifacts = Vec::new();
    if matches!(args.emit, EmitArg::Snapshot | EmitArg::Both) {
        let mut bytes = Vec::new();
        write_snapshots(&mut bytes, &nets)?;
        let file = format!("{}_network.json", span.label());
        artifacts.push(sink.raw(file, "network", span, nets.len(), &bytes)?);
    }
    if matches!(args.emit, EmitArg::Records | EmitArg::Both) {
        let records: Vec<_> = nets.iter().flat_map(|n| n.to_records()).collect();
        let mut bytes = Vec::new();
        write_records(&mut bytes, &records, args.record_format.into())?;
        let ext = match args.record_format {
            FormatArg::Csv => "csv",
            FormatArg::Tsv => "tsv",
        };
        let file = format!("{}_records.{ext}", span.label());
        artifacts.push(sink.raw(file, "records", span, records.len(), &bytes)?);
    }
    finish("synth", args, &sink, years, artifacts, Vec::new())
}

fn panel_row(net: &AnnualTradeNetwork, threshold: f64) -> itn_core::Result<PanelRow> {
    let summary = net.summarize();
    let k_max = (0..net.node_count()).map(|i| net.degree(i)).max().unwrap_or(0);
    let size = rich_club_size(&rich_club_curve(net), net, threshold)?;
    Ok(PanelRow {
        summary,
        mean_k: 2.0 * summary.l as f64 / summary.n as f64,
        k_max,
        s_rc: size.fraction,
        club_size: size.club_size,
    })
}

pub fn run_panel(args: &PanelArgs) -> Result<Outcome> {
    check_threshold(args.threshold)?;
    let data = args.input.load()?;
    let sink = args.output.sink()?;
    let mut errors = data.errors.clone();
    let mut artifacts = Vec::new();
    let Some(span) = Years::span(&data.years) else {
        return finish("panel", args, &sink, data.years, artifacts, errors);
    };
    let first = data.years[0];
    let rows: Vec<PanelRow> = data
        .nets
        .par_iter()
        .map(|net| panel_row(net, args.threshold))
        .collect::<itn_core::Result<_>>()?;
    artifacts.push(sink.table(Some(span), "timeseries", &tables::timeseries(&rows))?);

    let mut fits = Vec::new();
    let mean_k: Vec<(f64, f64)> = rows.iter().map(|r| (r.summary.n as f64, r.mean_k)).collect();
    let k_max: Vec<(f64, f64)> = rows.iter().map(|r| (r.summary.n as f64, r.k_max as f64)).collect();
    for (name, pts) in [("mean_k", mean_k), ("k_max", k_max)] {
        match scaling_regression(&pts) {
            Ok(f) => fits.push((name, f)),
            Err(e) => errors.push(YearError {
                year: first,
                message: format!("scaling of {name}: {e}"),
            }),
        }
    }
    artifacts.push(sink.table(Some(span), "scaling", &tables::scaling(&fits))?);

    if let Some(range) = args.degree_fit_range {
        match degree_distribution(&data.nets, range) {
            Ok(fit) => artifacts.push(sink.table(Some(span), "degree", &tables::degree_survival(&fit))?),
            Err(e) => errors.push(YearError {
                year: first,
                message: format!("degree distribution: {e}"),
            }),
        }
    }
    finish("panel", args, &sink, data.years, artifacts, errors)
}

pub fn run_analyze(args: &AnalyzeArgs) -> Result<Outcome> {
    args.fit.validate()?;
    args.percolation.validate()?;
    check_threshold(args.threshold)?;
    if args.disparity_bins_per_decade == 0 {
        return Err(Error::Config("--disparity-bins-per-decade must be positive".into()));
    }
    let spec = LogBinSpec {
        bins_per_decade: args.disparity_bins_per_decade,
        min_occupancy: args.min_occupancy,
    };
    let flows = FlowArg::All.kinds();
    let data = args.input.load()?;
    let sink = args.output.sink()?;
    let (artifacts, mut errors) = per_year(&data, &sink, |net, r| {
        r.table("summary", tables::summary(&[net.summarize()]));
        let mut metrics = tables::node_metrics(net, FlowKind::Total);
        for &flow in &flows[1..] {
            metrics.rows.extend(tables::node_metrics(net, flow).rows);
        }
        r.table("metrics", metrics);
        let d = disparity_tables(std::slice::from_ref(net), &flows, spec, r);
        r.table("disparity", d);
        args.fit.run(&weights_of(net), false, r);
        args.percolation.run(net, r);
        match club_entry(net, args.threshold) {
            Ok((_, t)) => r.table("richclub", t),
            Err(e) => r.fail("richclub", e),
        }
    })?;
    errors.extend(data.errors.iter().cloned());
    finish("analyze", args, &sink, data.years, artifacts, errors)
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Summary(a) => run_summary(a),
        Command::Metrics(a) => run_metrics(a),
        Command::Fit(a) => run_fit(a),
        Command::Percolate(a) => run_percolate(a),
        Command::Richclub(a) => run_richclub(a),
        Command::Synth(a) => run_synth(a),
        Command::Panel(a) => run_panel(a),
        Command::Analyze(a) => run_analyze(a),
    }
}

/// Exit codes: 0 success, 1 when some year failed, 2 on a usage, input or
/// output error.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            for e in &outcome.manifest.errors {
                eprintln!("itn: {}: {}", e.year, e.message);
            }
            ExitCode::from(outcome.exit_code())
        }
        Err(e) => {
            eprintln!("itn: {e}");
            ExitCode::from(2)
        }
    }
}
