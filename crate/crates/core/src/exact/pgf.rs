//! Inclusion-exclusion probability generating functions and exact PMFs.
//!
//! For a pairwise disjoint family the joint PGF of the intersection counts,
//! written in the `(s - 1)` basis, has coefficient `alpha_x = mu_x * w(x)`
//! at profile `x`, where `mu_x` counts x-matchings and `w(x)` is the exact
//! probability that a fixed x-matching extends to a uniform (balanced)
//! perfect matching:
//!
//! * complete host: `w(x) = n_(t) 2^t / (2n)_(2t)` with `t = |x|`;
//! * multipartite host: `w(x) = prod_{i<j} n_(psi3_ij) / prod_i ((r-1)n)_(psi2_i)`.
//!
//! Expanding the basis recovers the exact joint PMF. The complete-minus host
//! has no closed extension weight; its exact law is obtained by appending the
//! forbidden set as an extra member on the complete host and conditioning its
//! coordinate to zero.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exact::numbers::{binomial, falling};
use crate::exact::xcount::profile_counts;
use crate::exec::ExecMode;
use crate::graphs::{decompose_family, Edge, HostGraph, HostKind, SubgraphFamily};
use crate::pmf::ExactPmf;
use crate::profile::{IntersectionProfile, ProfileShape};
use crate::{Error, Result};

/// Coefficients of a generating function in the `(s - 1)^(psi1(x))` basis,
/// keyed by profile.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSeries {
    shape: ProfileShape,
    coeffs: BTreeMap<Vec<u32>, BigRational>,
}

impl CoeffSeries {
    pub fn new(shape: ProfileShape, coeffs: BTreeMap<Vec<u32>, BigRational>) -> CoeffSeries {
        debug_assert!(coeffs.keys().all(|x| x.len() == shape.len()));
        CoeffSeries { shape, coeffs }
    }

    pub fn shape(&self) -> &ProfileShape {
        &self.shape
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<u32>, BigRational> {
        &self.coeffs
    }

    pub fn coeff(&self, x: &[u32]) -> BigRational {
        self.coeffs.get(x).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Regroups coefficients by per-member totals, yielding an equivalent
    /// series over the flat `l`-dimensional shape.
    pub fn collapse_to_psi1(&self) -> CoeffSeries {
        let ell = self.shape.ell();
        let mut out: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        for (x, c) in &self.coeffs {
            let key = self.shape.psi1(x);
            let slot = out.entry(key).or_insert_with(BigRational::zero);
            *slot += c;
        }
        CoeffSeries::new(ProfileShape::complete(ell), out)
    }

    /// Evaluates the series at the point `s` (all coordinates of one member
    /// share a variable).
    pub fn eval(&self, s: &[BigRational]) -> BigRational {
        assert_eq!(s.len(), self.shape.ell());
        let mut acc = BigRational::zero();
        for (x, c) in &self.coeffs {
            let mut term = c.clone();
            for (m, &j) in self.shape.psi1(x).iter().enumerate() {
                let base = &s[m] - BigRational::one();
                for _ in 0..j {
                    term *= base.clone();
                }
            }
            acc += term;
        }
        acc
    }
}

/// A PGF series bound to the host it was computed on.
#[derive(Debug, Clone, PartialEq)]
pub struct PgfSeries {
    host: HostGraph,
    ell: usize,
    series: CoeffSeries,
}

impl PgfSeries {
    pub fn host(&self) -> &HostGraph {
        &self.host
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn series(&self) -> &CoeffSeries {
        &self.series
    }

    pub fn shape(&self) -> &ProfileShape {
        self.series.shape()
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<u32>, BigRational> {
        self.series.coeffs()
    }
}

/// Exact probability that a fixed x-matching is contained in the uniform
/// (balanced) perfect matching. Errors with [`Error::ProfileTooLarge`] when
/// the profile admits no extension (the zero-probability boundary).
pub fn extension_weight(host: &HostGraph, profile: &IntersectionProfile) -> Result<BigRational> {
    extension_weight_raw(host, profile.shape(), profile.counts()).ok_or(Error::ProfileTooLarge)
}

/// `None` encodes zero extension probability.
pub(crate) fn extension_weight_raw(
    host: &HostGraph,
    shape: &ProfileShape,
    x: &[u32],
) -> Option<BigRational> {
    match host.kind() {
        HostKind::Complete | HostKind::CompleteMinus => {
            let t = u64::from(shape.total(x));
            let n = host.n();
            if t > n {
                return None;
            }
            let num = falling(n, t) * BigInt::from(2u32).pow(t as u32);
            let den = falling(2 * n, 2 * t);
            Some(BigRational::new(num, den))
        }
        HostKind::Multipartite => {
            let n = host.n();
            let psi3 = shape.psi3(x);
            if psi3.iter().any(|&s| u64::from(s) > n) {
                return None;
            }
            let psi2 = shape.psi2(x);
            let mut num = BigInt::one();
            for &s in &psi3 {
                num *= falling(n, u64::from(s));
            }
            let mut den = BigInt::one();
            for &s in &psi2 {
                den *= falling(host.part_size(), u64::from(s));
            }
            Some(BigRational::new(num, den))
        }
    }
}

/// Builds the PGF of the intersection counts for a pairwise disjoint family
/// on a complete or multipartite host.
pub fn build_pgf(host: &HostGraph, family: &SubgraphFamily) -> Result<PgfSeries> {
    build_pgf_with_mode(host, family, ExecMode::default())
}

/// [`build_pgf`] with an explicit execution mode.
pub fn build_pgf_with_mode(
    host: &HostGraph,
    family: &SubgraphFamily,
    mode: ExecMode,
) -> Result<PgfSeries> {
    if host.kind() == HostKind::CompleteMinus {
        return Err(Error::UnsupportedHost {
            op: "generating-function construction (use the conditional route)",
            kind: host.kind(),
        });
    }
    let shape = family.shape().clone();
    let mu = profile_counts(host, family, None, mode)?;
    let mut coeffs: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
    for (x, count) in mu {
        if count.is_zero() {
            continue;
        }
        if let Some(w) = extension_weight_raw(host, &shape, &x) {
            coeffs.insert(x, BigRational::from(count) * w);
        }
    }
    debug_assert!(coeffs[&vec![0u32; shape.len()]].is_one());
    Ok(PgfSeries { host: host.clone(), ell: family.ell(), series: CoeffSeries::new(shape, coeffs) })
}

/// Expands a `(s - 1)`-basis series into the joint PMF:
/// `P(k) = sum_j a_j * prod_m C(j_m, k_m) * (-1)^(|j| - |k|)` over the
/// collapsed per-member coefficients `a_j`.
pub fn pmf_from_pgf(pgf: &PgfSeries) -> Result<ExactPmf> {
    pmf_from_sm1(&pgf.series().collapse_to_psi1())
}

/// PMF expansion from collapsed `(s - 1)` coefficients.
pub(crate) fn pmf_from_sm1(series: &CoeffSeries) -> Result<ExactPmf> {
    let ell = series.shape().ell();
    debug_assert_eq!(series.shape().slots(), 1);
    let coeffs = series.coeffs();
    let mut bounds = vec![0u32; ell];
    for j in coeffs.keys() {
        for (b, &v) in bounds.iter_mut().zip(j.iter()) {
            *b = (*b).max(v);
        }
    }
    let mut mass: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
    let mut k = vec![0u32; ell];
    loop {
        let mut p = BigRational::zero();
        for (j, c) in coeffs {
            if j.iter().zip(k.iter()).any(|(&jm, &km)| jm < km) {
                continue;
            }
            let mut term = c.clone();
            let mut parity = 0u32;
            for (&jm, &km) in j.iter().zip(k.iter()) {
                term *= BigRational::from(binomial(u64::from(jm), u64::from(km)));
                parity += jm - km;
            }
            if parity % 2 == 1 {
                p -= term;
            } else {
                p += term;
            }
        }
        if !p.is_zero() {
            mass.insert(k.clone(), p);
        }
        if !increment(&mut k, &bounds) {
            break;
        }
    }
    ExactPmf::from_rationals(ell, mass)
}

fn increment(k: &mut [u32], bounds: &[u32]) -> bool {
    for i in (0..k.len()).rev() {
        if k[i] < bounds[i] {
            k[i] += 1;
            return true;
        }
        k[i] = 0;
    }
    false
}

/// Binomial-moment transform: recovers the `(s - 1)`-basis coefficients of a
/// finite-support PMF, `a_j = sum_k P(k) * prod_m C(k_m, j_m)`. Inverse of
/// [`pmf_from_sm1`] on the flat shape.
pub fn sm1_series_from_pmf(pmf: &ExactPmf) -> CoeffSeries {
    let ell = pmf.ell();
    let mut bounds = vec![0u32; ell];
    for (k, _) in pmf.iter() {
        for (b, &v) in bounds.iter_mut().zip(k.iter()) {
            *b = (*b).max(v);
        }
    }
    let mut coeffs: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
    let mut j = vec![0u32; ell];
    loop {
        let mut a = BigRational::zero();
        for (k, p) in pmf.iter() {
            if k.iter().zip(j.iter()).any(|(&km, &jm)| km < jm) {
                continue;
            }
            let mut term = p.clone();
            for (&km, &jm) in k.iter().zip(j.iter()) {
                term *= BigRational::from(binomial(u64::from(km), u64::from(jm)));
            }
            a += term;
        }
        if !a.is_zero() {
            coeffs.insert(j.clone(), a);
        }
        if !increment(&mut j, &bounds) {
            break;
        }
    }
    CoeffSeries::new(ProfileShape::complete(ell), coeffs)
}

/// Exact joint law of the intersection counts for a uniform perfect matching
/// of the complete graph minus `forbidden`: appends the forbidden set as one
/// more member on the complete host, extracts the joint PMF, and conditions
/// its coordinate to zero. `members` and `forbidden` must be jointly
/// pairwise disjoint.
pub fn conditional_pmf_avoiding(
    n: u64,
    forbidden: &[Edge],
    members: &[Vec<Edge>],
) -> Result<ExactPmf> {
    let host = HostGraph::complete(n)?;
    let mut extended: Vec<Vec<Edge>> = members.to_vec();
    extended.push(forbidden.to_vec());
    let family = SubgraphFamily::validate(&host, extended, true)?;
    let pgf = build_pgf(&host, &family)?;
    let joint = pmf_from_pgf(&pgf)?;
    joint.condition_coordinate_zero(members.len())
}

/// Exact joint PMF for any host and any (possibly overlapping) family.
/// Overlapping families are decomposed into disjoint pieces; the piece law is
/// computed exactly and pushed through the summation map.
pub fn exact_pmf(host: &HostGraph, family: &SubgraphFamily) -> Result<ExactPmf> {
    if family.is_pairwise_disjoint() {
        match host.kind() {
            HostKind::Complete | HostKind::Multipartite => pmf_from_pgf(&build_pgf(host, family)?),
            HostKind::CompleteMinus => {
                conditional_pmf_avoiding(host.n(), host.forbidden(), family.members())
            }
        }
    } else {
        let dec = decompose_family(host, family)?;
        let bar = exact_pmf(host, dec.family())?;
        Ok(bar.push_forward(family.ell(), |kbar| dec.push_profile(kbar)))
    }
}
