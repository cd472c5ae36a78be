//! Poisson reference laws and total-variation comparisons.
//!
//! Reference rates are `|E(D_m)| / 2n` on complete-style hosts and
//! `|E(D_m)| / ((r-1)^2 n)` on multipartite hosts. For overlapping families
//! the decomposed reference draws one independent Poisson per nonempty
//! member subset and pushes the vector through the summation map, producing
//! a correlated joint Poisson law.
//!
//! Total variation follows the convention `Σ_k |P(k) − Q(k)|` without the
//! 1/2 factor. Truncated reference laws carry an explicit tail bound that
//! widens the reported interval.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::{
    build_pgf, conditional_pmf_avoiding, factorial, sm1_series_from_pmf, CoeffSeries,
};
use crate::graphs::{decompose_family, Decomposition, HostGraph, HostKind, SubgraphFamily};
use crate::pmf::FloatPmf;
use crate::profile::ProfileShape;
use crate::{Error, Result};

/// Guard for the truncated-support lattices enumerated below.
const MAX_LATTICE_POINTS: u64 = 20_000_000;

/// A multivariate Poisson reference law.
#[derive(Debug, Clone, PartialEq)]
pub enum PoissonSpec {
    /// Independent coordinates `Y_m ~ Po(rates[m])`.
    Independent { rates: Vec<BigRational> },
    /// One independent Poisson per nonempty member subset, summed back to
    /// the `ell` member coordinates through the decomposition map.
    Decomposed { ell: usize, subsets: Vec<u16>, rates: Vec<BigRational> },
}

impl PoissonSpec {
    /// Independent reference for a family on a host (the disjoint-family law).
    pub fn independent_for(host: &HostGraph, family: &SubgraphFamily) -> PoissonSpec {
        let den = BigInt::from(host.rate_denominator());
        let rates = family
            .d()
            .iter()
            .map(|&d| BigRational::new(BigInt::from(d), den.clone()))
            .collect();
        PoissonSpec::Independent { rates }
    }

    /// Decomposed reference for an overlapping family.
    pub fn decomposed_for(host: &HostGraph, dec: &Decomposition) -> PoissonSpec {
        let den = BigInt::from(host.rate_denominator());
        let rates = dec
            .family()
            .d()
            .iter()
            .map(|&d| BigRational::new(BigInt::from(d), den.clone()))
            .collect();
        PoissonSpec::Decomposed {
            ell: dec.original_ell(),
            subsets: dec.subsets().to_vec(),
            rates,
        }
    }

    /// Dimension of the emitted law.
    pub fn ell(&self) -> usize {
        match self {
            PoissonSpec::Independent { rates } => rates.len(),
            PoissonSpec::Decomposed { ell, .. } => *ell,
        }
    }

    /// Mean of each emitted coordinate; in decomposed mode the marginal mean
    /// of member `m` is the sum of the rates of the subsets containing it.
    pub fn marginal_means(&self) -> Vec<BigRational> {
        match self {
            PoissonSpec::Independent { rates } => rates.clone(),
            PoissonSpec::Decomposed { ell, subsets, rates } => {
                let mut out = vec![BigRational::zero(); *ell];
                for (idx, &mask) in subsets.iter().enumerate() {
                    for (m, slot) in out.iter_mut().enumerate() {
                        if mask & (1 << m) != 0 {
                            *slot += &rates[idx];
                        }
                    }
                }
                out
            }
        }
    }
}

/// Univariate Poisson masses `0..=K` where `K` is the smallest cutoff with
/// remaining tail below `budget`, plus the retained cumulative mass.
fn truncated_poisson(lambda: f64, budget: f64) -> (Vec<f64>, f64) {
    assert!(lambda >= 0.0 && budget > 0.0);
    if lambda == 0.0 {
        return (vec![1.0], 1.0);
    }
    let mut masses = Vec::new();
    let mut p = (-lambda).exp();
    let mut cum = 0.0;
    let mut k = 0u32;
    loop {
        masses.push(p);
        cum += p;
        if 1.0 - cum < budget {
            break;
        }
        k += 1;
        assert!(k < 10_000, "Poisson truncation failed to converge");
        p *= lambda / f64::from(k);
    }
    (masses, cum)
}

/// Joint PMF of the reference law, truncated so the discarded mass is below
/// `epsilon`; the exact discarded bound lands in `tail_bound`.
pub fn poisson_joint_pmf(spec: &PoissonSpec, epsilon: f64) -> FloatPmf {
    assert!(epsilon > 0.0 && epsilon < 1.0);
    let (rates, dims): (&[BigRational], usize) = match spec {
        PoissonSpec::Independent { rates } => (rates, rates.len()),
        PoissonSpec::Decomposed { subsets, rates, .. } => (rates, subsets.len()),
    };
    // Per-coordinate budget so the union of the tails stays below epsilon.
    let budget = epsilon / (2.0 * dims as f64);
    let mut coords: Vec<Vec<f64>> = Vec::with_capacity(dims);
    let mut retained = 1.0f64;
    let mut lattice_size = 1u64;
    for rate in rates {
        let lambda = rate.to_f64().expect("rate fits in f64");
        let (masses, cum) = truncated_poisson(lambda, budget);
        lattice_size = lattice_size.saturating_mul(masses.len() as u64);
        assert!(
            lattice_size <= MAX_LATTICE_POINTS,
            "truncated Poisson lattice too large ({lattice_size} points)"
        );
        coords.push(masses);
        retained *= cum;
    }
    let tail_bound = (1.0 - retained).max(0.0);

    let mut mass: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
    let mut k = vec![0u32; dims];
    loop {
        let p: f64 = k.iter().zip(coords.iter()).map(|(&ki, c)| c[ki as usize]).product();
        match spec {
            PoissonSpec::Independent { .. } => {
                mass.insert(k.clone(), p);
            }
            PoissonSpec::Decomposed { ell, subsets, .. } => {
                let mut key = vec![0u32; *ell];
                for (idx, &mask) in subsets.iter().enumerate() {
                    for (m, slot) in key.iter_mut().enumerate() {
                        if mask & (1 << m) != 0 {
                            *slot += k[idx];
                        }
                    }
                }
                *mass.entry(key).or_insert(0.0) += p;
            }
        }
        let mut advanced = false;
        for i in (0..dims).rev() {
            if (k[i] as usize) + 1 < coords[i].len() {
                k[i] += 1;
                advanced = true;
                break;
            }
            k[i] = 0;
        }
        if !advanced {
            break;
        }
    }
    FloatPmf::from_floats(spec.ell(), mass, tail_bound)
}

/// A total-variation value with the interval induced by truncation tails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TvEstimate {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Total variation `Σ_k |P(k) − Q(k)|` over the union of supports. The
/// interval widens by the two tail bounds.
pub fn tv_distance(p: &FloatPmf, q: &FloatPmf) -> Result<TvEstimate> {
    if p.ell() != q.ell() {
        return Err(Error::DimensionMismatch(p.ell(), q.ell()));
    }
    let mut value = 0.0f64;
    for (k, &pk) in p.iter() {
        value += (pk - q.mass(k)).abs();
    }
    for (k, &qk) in q.iter() {
        if p.get(k).is_none() {
            value += qk;
        }
    }
    let slack = p.tail_bound() + q.tail_bound();
    Ok(TvEstimate { value, lower: (value - slack).max(0.0), upper: value + slack })
}

/// The `(s - 1)`-basis coefficients of a multivariate Poisson law over a
/// profile shape: `beta_x = prod_c rate_c^(x_c) / x_c!`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonCoeffs {
    shape: ProfileShape,
    rates: Vec<BigRational>,
}

impl PoissonCoeffs {
    /// `rates` holds one entry per flat profile coordinate.
    pub fn new(shape: ProfileShape, rates: Vec<BigRational>) -> PoissonCoeffs {
        assert_eq!(rates.len(), shape.len());
        PoissonCoeffs { shape, rates }
    }

    /// Coefficients of the independent reference for a disjoint family:
    /// per-coordinate rates `d_c / denominator` over the family's own shape.
    pub fn independent_for(host: &HostGraph, family: &SubgraphFamily) -> PoissonCoeffs {
        let den = BigInt::from(host.rate_denominator());
        let rates = family
            .dcube()
            .iter()
            .map(|&d| BigRational::new(BigInt::from(d), den.clone()))
            .collect();
        PoissonCoeffs::new(family.shape().clone(), rates)
    }

    pub fn shape(&self) -> &ProfileShape {
        &self.shape
    }

    pub fn rates(&self) -> &[BigRational] {
        &self.rates
    }

    fn coeff(&self, x: &[u32]) -> BigRational {
        let mut acc = BigRational::one();
        for (&xi, rate) in x.iter().zip(self.rates.iter()) {
            if xi == 0 {
                continue;
            }
            if rate.is_zero() {
                return BigRational::zero();
            }
            let mut pow = BigRational::one();
            for _ in 0..xi {
                pow *= rate;
            }
            acc *= pow / BigRational::from(factorial(u64::from(xi)));
        }
        acc
    }

    /// Closed form of `Σ_x beta_x 2^{|x|}` over the full lattice.
    fn weighted_total(&self) -> f64 {
        let s: f64 = self.rates.iter().map(|r| r.to_f64().expect("rate fits in f64")).sum();
        (2.0 * s).exp()
    }
}

/// Coefficient-level total-variation bound: `Σ_x |alpha_x − beta_x| 2^{|x|}`
/// over the whole lattice. Inside the box spanned by the series support the
/// sum is exact rational arithmetic; the rest of the lattice has
/// `alpha_x = 0` and contributes `Σ beta_x 2^{|x|}`, evaluated in closed
/// form. The result dominates the total variation of the corresponding laws.
pub fn coeff_tv_bound(alpha: &CoeffSeries, beta: &PoissonCoeffs) -> Result<f64> {
    if alpha.shape() != beta.shape() {
        return Err(Error::ShapeMismatch);
    }
    let len = alpha.shape().len();
    let mut bounds = vec![0u32; len];
    for x in alpha.coeffs().keys() {
        for (b, &v) in bounds.iter_mut().zip(x.iter()) {
            *b = (*b).max(v);
        }
    }
    let points = bounds.iter().try_fold(1u64, |acc, &b| {
        let next = acc.checked_mul(u64::from(b) + 1)?;
        (next <= MAX_LATTICE_POINTS).then_some(next)
    });
    if points.is_none() {
        return Err(Error::TooLargeToEnumerate {
            size: u64::MAX,
            cap: MAX_LATTICE_POINTS,
        });
    }

    let mut in_box = BigRational::zero();
    let mut beta_in_box = BigRational::zero();
    let mut x = vec![0u32; len];
    loop {
        let b = beta.coeff(&x);
        let a = alpha.coeff(&x);
        let total: u32 = x.iter().sum();
        let two_pow = BigRational::from(BigInt::from(2u32).pow(total));
        in_box += (a - b.clone()).abs() * two_pow.clone();
        beta_in_box += b * two_pow;
        let mut advanced = false;
        for i in (0..len).rev() {
            if x[i] < bounds[i] {
                x[i] += 1;
                advanced = true;
                break;
            }
            x[i] = 0;
        }
        if !advanced {
            break;
        }
    }
    let remainder =
        (beta.weighted_total() - beta_in_box.to_f64().expect("finite sum")).max(0.0);
    Ok(in_box.to_f64().expect("finite sum") + remainder)
}

/// Coefficient bound for an arbitrary instance, routed by host and overlap:
///
/// * complete and multipartite hosts with disjoint families compare the PGF
///   coefficients against the Poisson coefficients on the family's shape;
/// * complete-minus hosts recover the `(s - 1)` coefficients of the exact
///   conditional law by the binomial-moment transform and compare on the
///   flat per-member shape (the bound lemma holds on any common shape);
/// * overlapping families are bounded at the decomposition level, which
///   dominates the total variation of the pushforward laws as well.
pub fn family_coeff_bound(host: &HostGraph, family: &SubgraphFamily) -> Result<f64> {
    if !family.is_pairwise_disjoint() {
        let dec = decompose_family(host, family)?;
        return family_coeff_bound(host, dec.family());
    }
    match host.kind() {
        HostKind::Complete | HostKind::Multipartite => {
            let pgf = build_pgf(host, family)?;
            let beta = PoissonCoeffs::independent_for(host, family);
            coeff_tv_bound(pgf.series(), &beta)
        }
        HostKind::CompleteMinus => {
            let pmf = conditional_pmf_avoiding(host.n(), host.forbidden(), family.members())?;
            let alpha = sm1_series_from_pmf(&pmf);
            let den = BigInt::from(host.rate_denominator());
            let rates = family
                .d()
                .iter()
                .map(|&d| BigRational::new(BigInt::from(d), den.clone()))
                .collect();
            let beta = PoissonCoeffs::new(ProfileShape::complete(family.ell()), rates);
            coeff_tv_bound(&alpha, &beta)
        }
    }
}
