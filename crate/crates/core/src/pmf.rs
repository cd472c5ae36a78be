//! Sparse joint probability mass functions on `N^l`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// A sparse PMF over `N^l`, keyed by the count vector. `T` is either an
/// exact [`BigRational`] or an `f64` (Poisson references, Monte Carlo).
/// `tail_bound` is an upper bound on probability mass truncated away;
/// exact laws carry 0.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf<T> {
    ell: usize,
    mass: BTreeMap<Vec<u32>, T>,
    tail_bound: f64,
}

/// Exact rational joint PMF.
pub type ExactPmf = JointPmf<BigRational>;
/// Floating-point joint PMF (empirical or truncated reference).
pub type FloatPmf = JointPmf<f64>;

impl<T> JointPmf<T> {
    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u32>, &T)> {
        self.mass.iter()
    }

    pub fn support_len(&self) -> usize {
        self.mass.len()
    }

    pub fn get(&self, k: &[u32]) -> Option<&T> {
        self.mass.get(k)
    }
}

impl<T> JointPmf<T>
where
    T: Clone + Zero,
{
    /// Pushes the law through a deterministic map of count vectors.
    pub fn push_forward(&self, new_ell: usize, map: impl Fn(&[u32]) -> Vec<u32>) -> JointPmf<T> {
        let mut out: BTreeMap<Vec<u32>, T> = BTreeMap::new();
        for (k, p) in &self.mass {
            let key = map(k);
            debug_assert_eq!(key.len(), new_ell);
            let slot = out.entry(key).or_insert_with(T::zero);
            *slot = slot.clone() + p.clone();
        }
        JointPmf { ell: new_ell, mass: out, tail_bound: self.tail_bound }
    }
}

impl ExactPmf {
    /// Builds an exact PMF from enumeration counts. Masses sum to 1 by
    /// construction; zero-count profiles are absent.
    pub(crate) fn from_counts(
        ell: usize,
        counts: BTreeMap<Vec<u32>, u64>,
        total: u64,
    ) -> ExactPmf {
        assert!(total > 0, "empty sample space");
        let denom = BigInt::from(total);
        let mass = counts
            .into_iter()
            .filter(|&(_, c)| c > 0)
            .map(|(k, c)| (k, BigRational::new(BigInt::from(c), denom.clone())))
            .collect();
        let pmf = JointPmf { ell, mass, tail_bound: 0.0 };
        debug_assert!(pmf.total_mass().is_one());
        pmf
    }

    /// Builds an exact PMF from rational masses, rejecting negatives and
    /// verifying normalization. Zero masses are dropped.
    pub(crate) fn from_rationals(
        ell: usize,
        mass: BTreeMap<Vec<u32>, BigRational>,
    ) -> Result<ExactPmf> {
        let mut total = BigRational::zero();
        for p in mass.values() {
            if p.is_negative() {
                return Err(Error::NegativeMass);
            }
            total += p;
        }
        assert!(total.is_one(), "exact masses must sum to 1, got {total}");
        let mass = mass.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        Ok(JointPmf { ell, mass, tail_bound: 0.0 })
    }

    /// Mass at `k` (zero when absent).
    pub fn mass(&self, k: &[u32]) -> BigRational {
        self.mass.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total_mass(&self) -> BigRational {
        self.mass.values().sum()
    }

    /// Conversion for total-variation reporting.
    pub fn to_float(&self) -> FloatPmf {
        let mass = self
            .mass
            .iter()
            .map(|(k, p)| (k.clone(), p.to_f64().expect("rational fits in f64")))
            .collect();
        JointPmf { ell: self.ell, mass, tail_bound: 0.0 }
    }

    /// Conditions on coordinate `coord` being zero and drops it.
    /// Errors if the conditioning event carries no mass.
    pub fn condition_coordinate_zero(&self, coord: usize) -> Result<ExactPmf> {
        let mut norm = BigRational::zero();
        let mut kept: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        for (k, p) in &self.mass {
            if k[coord] != 0 {
                continue;
            }
            norm += p;
            let mut reduced = k.clone();
            reduced.remove(coord);
            kept.insert(reduced, p.clone());
        }
        if norm.is_zero() {
            return Err(Error::ZeroConditioningMass);
        }
        let mass = kept.into_iter().map(|(k, p)| (k, p / norm.clone())).collect();
        Ok(JointPmf { ell: self.ell - 1, mass, tail_bound: 0.0 })
    }
}

impl FloatPmf {
    pub(crate) fn from_floats(
        ell: usize,
        mass: BTreeMap<Vec<u32>, f64>,
        tail_bound: f64,
    ) -> FloatPmf {
        debug_assert!(mass.values().all(|&p| p >= 0.0));
        JointPmf { ell, mass, tail_bound: tail_bound.max(0.0) }
    }

    /// Mass at `k` (zero when absent).
    pub fn mass(&self, k: &[u32]) -> f64 {
        self.mass.get(k).copied().unwrap_or(0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.mass.values().sum()
    }
}
