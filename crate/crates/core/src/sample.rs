//! Exactly-uniform seeded samplers and the Monte Carlo harness.
//!
//! Randomness comes from ChaCha8, a counter-based stream cipher with 64-bit
//! independent streams: the same `(seed, stream)` pair yields the same
//! sequence on every platform and run. Integer draws use explicit rejection
//! sampling on `next_u64`, so outputs do not depend on distribution
//! internals of any external crate.

use std::collections::BTreeMap;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exec::{map_indexed, ExecMode};
use crate::graphs::{intersect_profile, Edge, HostGraph, HostKind, Matching, SubgraphFamily};
use crate::pmf::FloatPmf;
use crate::{Error, Result};

/// Default attempt cap for rejection sampling on complete-minus hosts. The
/// acceptance rate is bounded below for sparse forbidden sets, so the cap
/// only trips on misuse.
pub const DEFAULT_REJECTION_BUDGET: u64 = 1_000_000;

/// A reproducible, splittable random generator: ChaCha8 keyed by `seed` with
/// the 64-bit stream id selecting an independent substream.
#[derive(Debug, Clone)]
pub struct SeededGenerator {
    rng: ChaCha8Rng,
    seed: u64,
    stream: u64,
}

impl SeededGenerator {
    pub fn new(seed: u64, stream: u64) -> SeededGenerator {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        SeededGenerator { rng, seed, stream }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform draw from `[0, n)` by rejection below the largest multiple
    /// of `n`, avoiding modulo bias.
    pub fn uniform_below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        let zone = (u64::MAX / n) * n;
        loop {
            let v = self.rng.next_u64();
            if v < zone {
                return v % n;
            }
        }
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.uniform_below(i as u64 + 1) as usize;
            xs.swap(i, j);
        }
    }
}

/// Uniform perfect matching of a complete or complete-minus host, with the
/// default rejection budget.
pub fn sample_pm(host: &HostGraph, gen: &mut SeededGenerator) -> Result<Matching> {
    sample_pm_with_budget(host, gen, DEFAULT_REJECTION_BUDGET)
}

/// Complete hosts: pair the lowest unmatched vertex with a uniformly chosen
/// partner, which is exactly uniform over all perfect matchings.
/// Complete-minus hosts: rejection from the complete sampler, exactly
/// uniform over the matchings avoiding the forbidden set.
pub fn sample_pm_with_budget(
    host: &HostGraph,
    gen: &mut SeededGenerator,
    budget: u64,
) -> Result<Matching> {
    match host.kind() {
        HostKind::Complete => Ok(sample_pm_complete(host.vertex_count() as usize, gen)),
        HostKind::CompleteMinus => {
            let v = host.vertex_count() as usize;
            for _ in 0..budget {
                let m = sample_pm_complete(v, gen);
                if m.edges().iter().all(|e| !host.is_forbidden(e)) {
                    return Ok(m);
                }
            }
            Err(Error::RejectionBudgetExceeded(budget))
        }
        kind => Err(Error::UnsupportedHost { op: "perfect matching sampling", kind }),
    }
}

fn sample_pm_complete(v: usize, gen: &mut SeededGenerator) -> Matching {
    let mut remaining: Vec<u32> = (0..v as u32).collect();
    let mut edges = Vec::with_capacity(v / 2);
    while remaining.len() > 1 {
        let u = remaining[0];
        let idx = 1 + gen.uniform_below(remaining.len() as u64 - 1) as usize;
        let w = remaining[idx];
        remaining.remove(idx);
        remaining.remove(0);
        edges.push(Edge::new(u, w).expect("distinct endpoints"));
    }
    // u is the lowest free vertex at every step, so edges arrive sorted.
    Matching::from_sorted_unchecked(edges)
}

/// Uniform balanced perfect matching of `K_{r x (r-1)n}`: each part is
/// shuffled and cut into labeled blocks of size `n` (a uniform labeled set
/// partition), then each block pair is joined by a uniform bijection. Every
/// balanced matching has exactly one such encoding, so the draw is exactly
/// uniform.
// Part indices carry block-offset arithmetic; range loops read better here.
#[allow(clippy::needless_range_loop)]
pub fn sample_balanced_pm(r: u32, n: u64, gen: &mut SeededGenerator) -> Result<Matching> {
    let host = HostGraph::multipartite(r, n)?;
    let part_size = host.part_size() as usize;
    let nn = n as usize;
    let ru = r as usize;

    // blocks[i][j]: the vertices of part i destined for part j, sorted.
    let mut blocks: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new(); ru]; ru];
    for i in 0..ru {
        let base = (i * part_size) as u32;
        let mut part: Vec<u32> = (0..part_size as u32).map(|t| base + t).collect();
        gen.shuffle(&mut part);
        let mut offset = 0usize;
        for j in 0..ru {
            if i == j {
                continue;
            }
            let mut block = part[offset..offset + nn].to_vec();
            block.sort_unstable();
            blocks[i][j] = block;
            offset += nn;
        }
    }

    let mut edges = Vec::with_capacity(host.vertex_count() as usize / 2);
    for i in 0..ru {
        for j in (i + 1)..ru {
            let mut partners = blocks[j][i].clone();
            gen.shuffle(&mut partners);
            for (a, b) in blocks[i][j].iter().zip(partners.iter()) {
                edges.push(Edge::new(*a, *b).expect("distinct endpoints"));
            }
        }
    }
    let m = Matching::new(edges)?;
    assert!(m.is_balanced(&host), "balanced sampler produced an unbalanced matching");
    Ok(m)
}

fn draw_for_host(host: &HostGraph, gen: &mut SeededGenerator) -> Result<Matching> {
    match host.kind() {
        HostKind::Complete | HostKind::CompleteMinus => sample_pm(host, gen),
        HostKind::Multipartite => sample_balanced_pm(host.r(), host.n(), gen),
    }
}

/// Empirical joint PMF of the intersection counts over `samples` i.i.d.
/// draws, single worker.
pub fn mc_pmf(
    host: &HostGraph,
    family: &SubgraphFamily,
    samples: u64,
    seed: u64,
) -> Result<FloatPmf> {
    mc_pmf_with(host, family, samples, seed, 1, ExecMode::default())
}

/// Monte Carlo harness: the draws are split into `workers` chunks, chunk `w`
/// consuming the independent stream `w` of the seed. Counts merge by
/// addition in chunk order, so the result depends only on
/// `(samples, seed, workers)`, not on scheduling or the execution mode.
pub fn mc_pmf_with(
    host: &HostGraph,
    family: &SubgraphFamily,
    samples: u64,
    seed: u64,
    workers: usize,
    mode: ExecMode,
) -> Result<FloatPmf> {
    assert!(samples >= 1 && workers >= 1);
    let workers = workers.min(samples as usize);
    let base = samples / workers as u64;
    let extra = (samples % workers as u64) as usize;

    let chunk_results: Vec<Result<BTreeMap<Vec<u32>, u64>>> =
        map_indexed(workers, mode, |w| {
            let quota = base + u64::from(w < extra);
            let mut gen = SeededGenerator::new(seed, w as u64);
            let mut counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
            for _ in 0..quota {
                let m = draw_for_host(host, &mut gen)?;
                let k = intersect_profile(&m, family, host).psi1();
                *counts.entry(k).or_insert(0) += 1;
            }
            Ok(counts)
        });

    let mut merged: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    for chunk in chunk_results {
        for (k, c) in chunk? {
            *merged.entry(k).or_insert(0) += c;
        }
    }
    let mass = merged
        .into_iter()
        .map(|(k, c)| (k, c as f64 / samples as f64))
        .collect();
    Ok(FloatPmf::from_floats(family.ell(), mass, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::enumerate_perfect_matchings;

    fn e(u: u32, v: u32) -> Edge {
        Edge::new(u, v).unwrap()
    }

    #[test]
    fn generator_is_reproducible_and_streams_differ() {
        let mut a = SeededGenerator::new(42, 0);
        let mut b = SeededGenerator::new(42, 0);
        let xs: Vec<u64> = (0..8).map(|_| a.uniform_below(1000)).collect();
        let ys: Vec<u64> = (0..8).map(|_| b.uniform_below(1000)).collect();
        assert_eq!(xs, ys);
        let mut c = SeededGenerator::new(42, 1);
        let zs: Vec<u64> = (0..8).map(|_| c.uniform_below(1000)).collect();
        assert_ne!(xs, zs);
    }

    #[test]
    fn k2_always_yields_the_unique_matching() {
        let host = HostGraph::complete(1).unwrap();
        let mut gen = SeededGenerator::new(7, 0);
        for _ in 0..16 {
            let m = sample_pm(&host, &mut gen).unwrap();
            assert_eq!(m.edges(), &[e(0, 1)]);
        }
    }

    #[test]
    fn complete_sampler_is_uniform_on_k4() {
        let host = HostGraph::complete(2).unwrap();
        let all = enumerate_perfect_matchings(&host).unwrap();
        let mut counts = vec![0u64; all.len()];
        let mut gen = SeededGenerator::new(20260810, 0);
        let draws = 30_000u64;
        for _ in 0..draws {
            let m = sample_pm(&host, &mut gen).unwrap();
            let idx = all.iter().position(|x| *x == m).unwrap();
            counts[idx] += 1;
        }
        for &c in &counts {
            let freq = c as f64 / draws as f64;
            assert!((freq - 1.0 / 3.0).abs() < 0.02, "frequency {freq}");
        }
    }

    #[test]
    fn rejection_sampler_avoids_forbidden_edges() {
        let host = HostGraph::complete_minus(2, vec![e(0, 1)]).unwrap();
        let mut gen = SeededGenerator::new(3, 0);
        for _ in 0..200 {
            let m = sample_pm(&host, &mut gen).unwrap();
            assert!(!m.contains(&e(0, 1)));
        }
    }

    #[test]
    fn balanced_sampler_is_uniform_on_k3x2() {
        let host = HostGraph::multipartite(3, 1).unwrap();
        let all = crate::exact::enumerate_balanced_pms(3, 1).unwrap();
        assert_eq!(all.len(), 8);
        let mut counts = vec![0u64; 8];
        let mut gen = SeededGenerator::new(99, 0);
        let draws = 40_000u64;
        for _ in 0..draws {
            let m = sample_balanced_pm(3, 1, &mut gen).unwrap();
            assert!(m.is_balanced(&host));
            let idx = all.iter().position(|x| *x == m).unwrap();
            counts[idx] += 1;
        }
        for &c in &counts {
            let freq = c as f64 / draws as f64;
            assert!((freq - 0.125).abs() < 0.02, "frequency {freq}");
        }
    }

    #[test]
    fn balanced_sampler_special_cases() {
        let mut gen = SeededGenerator::new(5, 0);
        let m = sample_balanced_pm(2, 1, &mut gen).unwrap();
        assert_eq!(m.edges(), &[e(0, 1)]);
    }

    #[test]
    fn mc_pmf_is_deterministic_and_accurate() {
        let host = HostGraph::complete(2).unwrap();
        let fam = SubgraphFamily::validate(&host, vec![vec![e(0, 1)]], false).unwrap();
        let a = mc_pmf(&host, &fam, 100_000, 11).unwrap();
        let b = mc_pmf(&host, &fam, 100_000, 11).unwrap();
        assert_eq!(a, b);
        assert!((a.mass(&[1]) - 1.0 / 3.0).abs() < 0.01);
    }

    #[test]
    fn single_sample_is_a_point_mass() {
        let host = HostGraph::complete(2).unwrap();
        let fam = SubgraphFamily::validate(&host, vec![vec![e(0, 1)]], false).unwrap();
        let pmf = mc_pmf(&host, &fam, 1, 0).unwrap();
        assert_eq!(pmf.total_mass(), 1.0);
        assert_eq!(pmf.support_len(), 1);
    }

    #[test]
    fn worker_split_is_execution_independent() {
        let host = HostGraph::complete(3).unwrap();
        let fam = SubgraphFamily::validate(&host, vec![vec![e(0, 1), e(2, 3)]], false).unwrap();
        let seq = mc_pmf_with(&host, &fam, 5000, 17, 4, ExecMode::Sequential).unwrap();
        #[cfg(feature = "parallel")]
        {
            let par = mc_pmf_with(&host, &fam, 5000, 17, 4, ExecMode::Parallel).unwrap();
            assert_eq!(seq, par);
        }
        // Different worker counts use different stream assignments, which is
        // allowed to change the histogram but not its normalization.
        let other = mc_pmf_with(&host, &fam, 5000, 17, 2, ExecMode::Sequential).unwrap();
        assert!((other.total_mass() - 1.0).abs() < 1e-12);
        assert!((seq.total_mass() - 1.0).abs() < 1e-12);
    }
}
