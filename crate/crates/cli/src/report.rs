//! Deterministic CSV and JSON emission. Floats are fixed at 6 decimals in
//! CSV; JSON carries exact rationals as "numerator/denominator" strings next
//! to their float values. No timestamps or environment data appear in
//! outputs, so identical configurations produce identical bytes.

use std::collections::BTreeSet;

use num_rational::BigRational;
use serde::Serialize;

use matchdist::dist::TvEstimate;
use matchdist::model::HostSpec;
use matchdist::{ExactPmf, FloatPmf};

/// Total-variation convention recorded in JSON reports.
pub const TV_CONVENTION: &str = "sum_k |P(k) - Q(k)| (no 1/2 factor)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.6}")
}

pub fn fmt_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn fmt_k(k: &[u32]) -> String {
    k.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";")
}

#[derive(Debug, Clone, Serialize)]
pub struct MassRow {
    pub k: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReferenceBlock {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rates: Option<Vec<String>>,
    pub tail_bound: f64,
    pub pmf: Vec<MassRow>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TvBlock {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

impl From<TvEstimate> for TvBlock {
    fn from(tv: TvEstimate) -> TvBlock {
        TvBlock { value: tv.value, lower: tv.lower, upper: tv.upper }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PieceRow {
    pub subset: Vec<usize>,
    pub edges: u64,
}

/// One `(s - 1)`-basis coefficient, keyed by its profile.
#[derive(Debug, Clone, Serialize)]
pub struct CoeffRow {
    pub x: Vec<u32>,
    pub alpha: String,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PgfBlock {
    pub ell: usize,
    /// Unordered part pairs of the profile shape; empty on complete hosts.
    pub part_pairs: Vec<(u32, u32)>,
    pub coefficients: Vec<CoeffRow>,
}

/// One exact or sampled instance, ready for emission.
#[derive(Debug, Clone, Serialize)]
pub struct InstanceReport {
    pub model: String,
    pub host: HostSpec,
    pub l: usize,
    pub empirical: bool,
    pub tv_convention: &'static str,
    pub epsilon: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    pub pmf: Vec<MassRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tv: Option<TvBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeff_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<Vec<PieceRow>>,
    /// Generating-function coefficients (JSON output of exact runs on
    /// complete and multipartite hosts with disjoint families).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pgf: Option<PgfBlock>,
}

pub fn exact_mass_rows(pmf: &ExactPmf) -> Vec<MassRow> {
    pmf.iter()
        .map(|(k, p)| MassRow {
            k: k.clone(),
            exact: Some(fmt_rational(p)),
            value: num_traits::ToPrimitive::to_f64(p).expect("mass fits in f64"),
        })
        .collect()
}

pub fn float_mass_rows(pmf: &FloatPmf) -> Vec<MassRow> {
    pmf.iter().map(|(k, &p)| MassRow { k: k.clone(), exact: None, value: p }).collect()
}

impl InstanceReport {
    /// The union of primary and reference supports, sorted.
    fn row_keys(&self) -> Vec<Vec<u32>> {
        let mut keys: BTreeSet<Vec<u32>> = self.pmf.iter().map(|r| r.k.clone()).collect();
        if let Some(reference) = &self.reference {
            keys.extend(reference.pmf.iter().map(|r| r.k.clone()));
        }
        keys.into_iter().collect()
    }

    fn value_at(rows: &[MassRow], k: &[u32]) -> Option<f64> {
        rows.iter().find(|r| r.k == k).map(|r| r.value)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "model,n,l,empirical,seed,samples,k,mass,reference,tv,tv_lower,tv_upper,coeff_bound,pieces\n",
        );
        let tv = self.tv.map(|t| (fmt_f64(t.value), fmt_f64(t.lower), fmt_f64(t.upper)));
        let (tv_v, tv_l, tv_u) = match &tv {
            Some((v, l, u)) => (v.as_str(), l.as_str(), u.as_str()),
            None => ("", "", ""),
        };
        let bound = self.coeff_bound.map(fmt_f64).unwrap_or_default();
        let pieces = self
            .decomposition
            .as_ref()
            .map(|pieces| {
                pieces
                    .iter()
                    .map(|p| {
                        let subset = p
                            .subset
                            .iter()
                            .map(|m| m.to_string())
                            .collect::<Vec<_>>()
                            .join(" ");
                        format!("{{{subset}}}:{}", p.edges)
                    })
                    .collect::<Vec<_>>()
                    .join("|")
            })
            .unwrap_or_default();
        let seed = self.seed.map(|s| s.to_string()).unwrap_or_default();
        let samples = self.samples.map(|s| s.to_string()).unwrap_or_default();
        for k in self.row_keys() {
            let mass = Self::value_at(&self.pmf, &k).unwrap_or(0.0);
            let reference = self
                .reference
                .as_ref()
                .map(|r| fmt_f64(Self::value_at(&r.pmf, &k).unwrap_or(0.0)))
                .unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                self.model,
                self.host.n,
                self.l,
                self.empirical,
                seed,
                samples,
                fmt_k(&k),
                fmt_f64(mass),
                reference,
                tv_v,
                tv_l,
                tv_u,
                bound,
                pieces,
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// One sweep row: exact P(X = 0) against the Poisson prediction.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub n: u64,
    pub l: usize,
    pub p0_exact: String,
    pub p0_exact_value: f64,
    pub p0_poisson: f64,
    pub tv: TvBlock,
    pub coeff_bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub template: String,
    pub r: u32,
    pub tv_convention: &'static str,
    pub epsilon: f64,
    pub rows: Vec<SweepRow>,
    pub trend: String,
}

/// Counts monotone steps of the exact P(X = 0) and of its distance to the
/// Poisson prediction.
pub fn trend_line(rows: &[SweepRow]) -> String {
    if rows.len() < 2 {
        return String::from("trend: not enough rows");
    }
    let steps = rows.len() - 1;
    let inc = rows.windows(2).filter(|w| w[1].p0_exact_value > w[0].p0_exact_value).count();
    let dec = rows.windows(2).filter(|w| w[1].p0_exact_value < w[0].p0_exact_value).count();
    let gap_dec = rows
        .windows(2)
        .filter(|w| {
            (w[1].p0_exact_value - w[1].p0_poisson).abs()
                < (w[0].p0_exact_value - w[0].p0_poisson).abs()
        })
        .count();
    let direction = if inc == steps {
        format!("p0 strictly increasing {inc}/{steps} steps")
    } else if dec == steps {
        format!("p0 strictly decreasing {dec}/{steps} steps")
    } else {
        format!("p0 non-monotone ({inc}/{steps} increasing)")
    };
    format!("{direction}; |p0 - poisson| shrinking {gap_dec}/{steps} steps")
}

impl SweepReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "template,r,n,l,p0_exact,p0_poisson,tv,tv_lower,tv_upper,coeff_bound,trend\n",
        );
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},\n",
                self.template,
                self.r,
                row.n,
                row.l,
                fmt_f64(row.p0_exact_value),
                fmt_f64(row.p0_poisson),
                fmt_f64(row.tv.value),
                fmt_f64(row.tv.lower),
                fmt_f64(row.tv.upper),
                fmt_f64(row.coeff_bound),
            ));
        }
        out.push_str(&format!("{},{},,,,,,,,,{}\n", self.template, self.r, self.trend));
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}
