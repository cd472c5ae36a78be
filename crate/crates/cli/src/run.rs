//! Command orchestration: load a model, run the requested computation, and
//! write the report. Exit code 2 flags validation problems, 3 resource caps.

use std::fs;
use std::path::{Path, PathBuf};

use num_traits::ToPrimitive;
use serde::Serialize;

use matchdist::dist::{
    family_coeff_bound, poisson_joint_pmf, tv_distance, PoissonSpec, TvEstimate,
};
use matchdist::exact::{build_pgf, exact_pmf};
use matchdist::model::ModelFile;
use matchdist::sample::mc_pmf_with;
use matchdist::{
    decompose_family, Error as CoreError, ExecMode, HostGraph, SubgraphFamily,
};

use crate::report::{
    exact_mass_rows, float_mass_rows, fmt_rational, trend_line, CoeffRow, Format,
    InstanceReport, PgfBlock, PieceRow, ReferenceBlock, SweepReport, SweepRow, TvBlock,
    TV_CONVENTION,
};
use crate::templates::Template;

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// A failed run: machine-readable kind and message, plus the exit code.
#[derive(Debug, Serialize)]
pub struct RunError {
    pub kind: String,
    pub message: String,
    #[serde(skip)]
    pub exit_code: i32,
}

impl RunError {
    fn new(kind: &str, message: String, exit_code: i32) -> RunError {
        RunError { kind: kind.into(), message, exit_code }
    }

    pub fn validation(kind: &str, message: String) -> RunError {
        RunError::new(kind, message, EXIT_VALIDATION)
    }
}

impl From<CoreError> for RunError {
    fn from(e: CoreError) -> RunError {
        let exit_code = match e {
            CoreError::TooLargeToEnumerate { .. } | CoreError::RejectionBudgetExceeded(_) => {
                EXIT_RESOURCE
            }
            _ => EXIT_VALIDATION,
        };
        let kind = match e {
            CoreError::InvalidPartition(_) => "InvalidPartition",
            CoreError::ForbiddenTooDense { .. } => "ForbiddenTooDense",
            CoreError::MalformedEdge { .. } => "MalformedEdge",
            CoreError::EmptyHost => "EmptyHost",
            CoreError::HostTooLarge(_) => "HostTooLarge",
            CoreError::OverlapInDisjointMode { .. } => "OverlapInDisjointMode",
            CoreError::EdgeInForbiddenSet { .. } => "EdgeInForbiddenSet",
            CoreError::EdgeOutOfHost { .. } => "EdgeOutOfHost",
            CoreError::EmptyFamily => "EmptyFamily",
            CoreError::TooManyFamilies(_) => "TooManyFamilies",
            CoreError::NotAMatching { .. } => "NotAMatching",
            CoreError::TooLargeToEnumerate { .. } => "TooLargeToEnumerate",
            CoreError::ProfileOutOfRange(_) => "ProfileOutOfRange",
            CoreError::ProfileTooLarge => "ProfileTooLarge",
            CoreError::NegativeMass => "NegativeMass",
            CoreError::ZeroConditioningMass => "ZeroConditioningMass",
            CoreError::DimensionMismatch(_, _) => "DimensionMismatch",
            CoreError::ShapeMismatch => "ShapeMismatch",
            CoreError::RejectionBudgetExceeded(_) => "RejectionBudgetExceeded",
            CoreError::UnsupportedHost { .. } => "UnsupportedHost",
        };
        RunError::new(kind, e.to_string(), exit_code)
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> RunError {
        RunError::validation("Io", e.to_string())
    }
}

impl From<serde_json::Error> for RunError {
    fn from(e: serde_json::Error) -> RunError {
        RunError::validation("ModelParse", e.to_string())
    }
}

#[derive(Debug, Clone)]
pub struct ExactConfig {
    pub model: PathBuf,
    pub decompose: bool,
    pub epsilon: f64,
    pub format: Format,
    pub out: PathBuf,
}

#[derive(Debug, Clone)]
pub struct SampleConfig {
    pub model: PathBuf,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
    pub against_exact: bool,
    pub epsilon: f64,
    pub format: Format,
    pub out: PathBuf,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub template: Template,
    pub r: u32,
    pub n_from: u64,
    pub n_to: u64,
    pub epsilon: f64,
    pub format: Format,
    pub out: PathBuf,
}

fn load_model(path: &Path) -> Result<(String, HostGraph, SubgraphFamily), RunError> {
    let text = fs::read_to_string(path)?;
    let model: ModelFile = serde_json::from_str(&text)?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().replace(',', "_"))
        .unwrap_or_else(|| "model".into());
    let (host, family) = model.build()?;
    Ok((label, host, family))
}

fn reference_spec(
    host: &HostGraph,
    family: &SubgraphFamily,
    decompose: bool,
) -> Result<(PoissonSpec, String), RunError> {
    if decompose {
        let dec = decompose_family(host, family)?;
        Ok((PoissonSpec::decomposed_for(host, &dec), "poisson_decomposed".into()))
    } else {
        Ok((PoissonSpec::independent_for(host, family), "poisson_independent".into()))
    }
}

pub fn run_exact(cfg: &ExactConfig) -> Result<(), RunError> {
    let (label, host, family) = load_model(&cfg.model)?;
    let exact = exact_pmf(&host, &family)?;
    let (spec, ref_kind) = reference_spec(&host, &family, cfg.decompose)?;
    let reference = poisson_joint_pmf(&spec, cfg.epsilon);
    let tv = tv_distance(&exact.to_float(), &reference)?;
    let coeff_bound = family_coeff_bound(&host, &family)?;
    let decomposition = if cfg.decompose {
        let dec = decompose_family(&host, &family)?;
        Some(
            (0..dec.subsets().len())
                .map(|idx| PieceRow {
                    subset: dec.subset_members(idx).iter().map(|m| m + 1).collect(),
                    edges: dec.family().d()[idx],
                })
                .collect(),
        )
    } else {
        None
    };
    let rates = match &spec {
        PoissonSpec::Independent { rates } => rates,
        PoissonSpec::Decomposed { rates, .. } => rates,
    };
    // The generating function exists for disjoint families away from the
    // conditional route; emit its coefficients in JSON reports.
    let pgf = if cfg.format == Format::Json
        && family.is_pairwise_disjoint()
        && host.kind() != matchdist::HostKind::CompleteMinus
    {
        let series = build_pgf(&host, &family)?;
        Some(PgfBlock {
            ell: family.ell(),
            part_pairs: series.shape().part_pairs().to_vec(),
            coefficients: series
                .coeffs()
                .iter()
                .map(|(x, alpha)| CoeffRow {
                    x: x.clone(),
                    alpha: fmt_rational(alpha),
                    value: alpha.to_f64().expect("coefficient fits in f64"),
                })
                .collect(),
        })
    } else {
        None
    };
    let report = InstanceReport {
        model: label,
        host: ModelFile::from_parts(&host, &family).host,
        l: family.ell(),
        empirical: false,
        tv_convention: TV_CONVENTION,
        epsilon: cfg.epsilon,
        seed: None,
        samples: None,
        workers: None,
        pmf: exact_mass_rows(&exact),
        reference: Some(ReferenceBlock {
            kind: ref_kind,
            rates: Some(rates.iter().map(fmt_rational).collect()),
            tail_bound: reference.tail_bound(),
            pmf: float_mass_rows(&reference),
        }),
        tv: Some(tv.into()),
        coeff_bound: Some(coeff_bound),
        decomposition,
        pgf,
    };
    fs::write(&cfg.out, report.render(cfg.format))?;
    println!("wrote {}", cfg.out.display());
    Ok(())
}

pub fn run_sample(cfg: &SampleConfig) -> Result<(), RunError> {
    let (label, host, family) = load_model(&cfg.model)?;
    let empirical =
        mc_pmf_with(&host, &family, cfg.samples, cfg.seed, cfg.workers, ExecMode::default())?;
    let (reference, tv) = if cfg.against_exact {
        let exact = exact_pmf(&host, &family)?;
        let tv: TvEstimate = tv_distance(&empirical, &exact.to_float())?;
        let block = ReferenceBlock {
            kind: "exact".into(),
            rates: None,
            tail_bound: 0.0,
            pmf: exact_mass_rows(&exact),
        };
        (Some(block), Some(TvBlock::from(tv)))
    } else {
        (None, None)
    };
    let report = InstanceReport {
        model: label,
        host: ModelFile::from_parts(&host, &family).host,
        l: family.ell(),
        empirical: true,
        tv_convention: TV_CONVENTION,
        epsilon: cfg.epsilon,
        seed: Some(cfg.seed),
        samples: Some(cfg.samples),
        workers: Some(cfg.workers),
        pmf: float_mass_rows(&empirical),
        reference,
        tv,
        coeff_bound: None,
        decomposition: None,
        pgf: None,
    };
    fs::write(&cfg.out, report.render(cfg.format))?;
    println!("wrote {}", cfg.out.display());
    Ok(())
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<(), RunError> {
    if cfg.n_from > cfg.n_to {
        return Err(RunError::validation(
            "EmptySweep",
            format!("sweep range {}..={} is empty", cfg.n_from, cfg.n_to),
        ));
    }
    let mut rows: Vec<SweepRow> = Vec::new();
    let mut failure: Option<RunError> = None;
    for n in cfg.n_from..=cfg.n_to {
        match sweep_row(cfg, n) {
            Ok(row) => rows.push(row),
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
    }
    let report = SweepReport {
        template: cfg.template.to_string(),
        r: cfg.r,
        tv_convention: TV_CONVENTION,
        epsilon: cfg.epsilon,
        trend: trend_line(&rows),
        rows,
    };
    // Partial rows are preserved even when a size fails.
    fs::write(&cfg.out, report.render(cfg.format))?;
    match failure {
        Some(e) => Err(e),
        None => {
            println!("wrote {}", cfg.out.display());
            Ok(())
        }
    }
}

fn sweep_row(cfg: &SweepConfig, n: u64) -> Result<SweepRow, RunError> {
    let (host, family) = cfg.template.instantiate(n, cfg.r)?;
    let exact = exact_pmf(&host, &family)?;
    let spec = PoissonSpec::independent_for(&host, &family);
    let reference = poisson_joint_pmf(&spec, cfg.epsilon);
    let tv = tv_distance(&exact.to_float(), &reference)?;
    let coeff_bound = family_coeff_bound(&host, &family)?;
    let zero = vec![0u32; family.ell()];
    let p0 = exact.mass(&zero);
    Ok(SweepRow {
        n,
        l: family.ell(),
        p0_exact: fmt_rational(&p0),
        p0_exact_value: p0.to_f64().expect("probability fits in f64"),
        p0_poisson: reference.mass(&zero),
        tv: tv.into(),
        coeff_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn core_errors_map_to_exit_codes() {
        let resource: RunError =
            CoreError::TooLargeToEnumerate { size: 99, cap: 16 }.into();
        assert_eq!(resource.exit_code, EXIT_RESOURCE);
        assert_eq!(resource.kind, "TooLargeToEnumerate");
        let validation: RunError = CoreError::EmptyFamily.into();
        assert_eq!(validation.exit_code, EXIT_VALIDATION);
    }
}
