//! Dyadic trade records and their pairing into per-pair flow quadruples.
//!
//! Each country pair in a year can be described by up to four reported
//! flows: what `a` says it exported to `b`, what `a` says it imported from
//! `b`, and the two mirror figures reported by `b`. Reports from the two
//! sides rarely agree, so they are kept apart here and reconciled later in
//! [`crate::network::symmetrize`].

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Opaque, case-sensitive country identifier.
///
/// Ordering is plain lexicographic byte order; it fixes the canonical
/// orientation of every pair and all downstream tie-breaks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CountryCode(String);

impl CountryCode {
    pub fn new(code: impl Into<String>) -> Self {
        CountryCode(code.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for CountryCode {
    fn from(s: &str) -> Self {
        CountryCode(s.into())
    }
}

impl From<String> for CountryCode {
    fn from(s: String) -> Self {
        CountryCode(s)
    }
}

impl fmt::Display for CountryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One reported row: `reporter`'s export to and import from `partner`,
/// in million USD.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicRecord {
    pub year: i32,
    pub reporter: CountryCode,
    pub partner: CountryCode,
    pub export_value: Option<f64>,
    pub import_value: Option<f64>,
}

fn check_flow(value: Option<f64>, name: &str) -> Result<()> {
    match value {
        Some(v) if !v.is_finite() || v < 0.0 => Err(Error::InvalidRecord(format!(
            "{name} value {v} must be finite and non-negative"
        ))),
        _ => Ok(()),
    }
}

impl DyadicRecord {
    pub fn new(
        year: i32,
        reporter: impl Into<CountryCode>,
        partner: impl Into<CountryCode>,
        export_value: Option<f64>,
        import_value: Option<f64>,
    ) -> Result<Self> {
        let record = DyadicRecord {
            year,
            reporter: reporter.into(),
            partner: partner.into(),
            export_value,
            import_value,
        };
        record.validate()?;
        Ok(record)
    }

    pub fn validate(&self) -> Result<()> {
        if self.reporter == self.partner {
            return Err(Error::InvalidRecord(format!(
                "self-trade record for {}",
                self.reporter
            )));
        }
        check_flow(self.export_value, "export")?;
        check_flow(self.import_value, "import")
    }
}

/// The four flows of one canonical pair `country_a < country_b`.
///
/// `exp_ab`/`imp_ab` are reported by `a`, `exp_ba`/`imp_ba` by `b`.
/// Zero-valued reports are stored as missing.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedFlows {
    pub year: i32,
    pub country_a: CountryCode,
    pub country_b: CountryCode,
    pub exp_ab: Option<f64>,
    pub imp_ab: Option<f64>,
    pub exp_ba: Option<f64>,
    pub imp_ba: Option<f64>,
}

impl PairedFlows {
    /// True when at least one flow is present and positive.
    pub fn has_flow(&self) -> bool {
        [self.exp_ab, self.imp_ab, self.exp_ba, self.imp_ba]
            .iter()
            .any(|v| matches!(v, Some(x) if *x > 0.0))
    }

    /// Re-expresses the pair as the (at most two) records that produced it.
    pub fn to_records(&self) -> Vec<DyadicRecord> {
        let mut out = Vec::with_capacity(2);
        if self.exp_ab.is_some() || self.imp_ab.is_some() {
            out.push(DyadicRecord {
                year: self.year,
                reporter: self.country_a.clone(),
                partner: self.country_b.clone(),
                export_value: self.exp_ab,
                import_value: self.imp_ab,
            });
        }
        if self.exp_ba.is_some() || self.imp_ba.is_some() {
            out.push(DyadicRecord {
                year: self.year,
                reporter: self.country_b.clone(),
                partner: self.country_a.clone(),
                export_value: self.exp_ba,
                import_value: self.imp_ba,
            });
        }
        out
    }
}

/// How repeated reports of the same directed flow are merged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DuplicatePolicy {
    #[default]
    Mean,
    First,
    Max,
}

impl DuplicatePolicy {
    fn resolve(self, values: &mut [f64]) -> Option<f64> {
        if values.is_empty() {
            return None;
        }
        match self {
            DuplicatePolicy::First => Some(values[0]),
            DuplicatePolicy::Max => values.iter().copied().reduce(f64::max),
            DuplicatePolicy::Mean => {
                // sorted so the sum does not depend on input order
                values.sort_by(f64::total_cmp);
                let sum: f64 = values.iter().sum();
                Some(sum / values.len() as f64)
            }
        }
    }
}

#[derive(Default)]
struct FlowSlots {
    exp_ab: Vec<f64>,
    imp_ab: Vec<f64>,
    exp_ba: Vec<f64>,
    imp_ba: Vec<f64>,
}

/// Groups the records of `year` into one [`PairedFlows`] per unordered pair.
///
/// Records of other years are skipped. Zero and missing values contribute
/// nothing; pairs left without any positive flow are dropped. Output is
/// sorted by canonical pair.
pub fn pair_flows(
    records: &[DyadicRecord],
    year: i32,
    policy: DuplicatePolicy,
) -> Vec<PairedFlows> {
    let mut slots: BTreeMap<(&CountryCode, &CountryCode), FlowSlots> = BTreeMap::new();
    for rec in records.iter().filter(|r| r.year == year) {
        let reporter_is_a = rec.reporter < rec.partner;
        let key = if reporter_is_a {
            (&rec.reporter, &rec.partner)
        } else {
            (&rec.partner, &rec.reporter)
        };
        let entry = slots.entry(key).or_default();
        let (exp, imp) = if reporter_is_a {
            (&mut entry.exp_ab, &mut entry.imp_ab)
        } else {
            (&mut entry.exp_ba, &mut entry.imp_ba)
        };
        if let Some(v) = rec.export_value.filter(|v| *v > 0.0) {
            exp.push(v);
        }
        if let Some(v) = rec.import_value.filter(|v| *v > 0.0) {
            imp.push(v);
        }
    }

    slots
        .into_iter()
        .filter_map(|((a, b), mut s)| {
            let pf = PairedFlows {
                year,
                country_a: a.clone(),
                country_b: b.clone(),
                exp_ab: policy.resolve(&mut s.exp_ab),
                imp_ab: policy.resolve(&mut s.imp_ab),
                exp_ba: policy.resolve(&mut s.exp_ba),
                imp_ba: policy.resolve(&mut s.imp_ba),
            };
            pf.has_flow().then_some(pf)
        })
        .collect()
}
