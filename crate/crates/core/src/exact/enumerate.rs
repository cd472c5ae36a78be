//! Brute-force enumeration oracles for small hosts.

use std::collections::BTreeMap;

use crate::graphs::{intersect_profile, Edge, HostGraph, HostKind, Matching, SubgraphFamily};
use crate::pmf::ExactPmf;
use crate::profile::ProfileShape;
use crate::{Error, Result};

/// Vertex cap for perfect-matching enumeration (pma(8) = 2,027,025).
pub const PERFECT_MATCHING_ENUM_CAP: u64 = 16;
/// Vertex cap for balanced-matching enumeration.
pub const BALANCED_ENUM_CAP: u64 = 12;

/// Visits every perfect matching of a complete or complete-minus host exactly
/// once, in lexicographic edge order, and returns the count.
pub fn for_each_perfect_matching(
    host: &HostGraph,
    visit: impl FnMut(&Matching),
) -> Result<u64> {
    for_each_perfect_matching_capped(host, PERFECT_MATCHING_ENUM_CAP, visit)
}

/// [`for_each_perfect_matching`] with an explicit vertex cap.
pub fn for_each_perfect_matching_capped(
    host: &HostGraph,
    cap: u64,
    mut visit: impl FnMut(&Matching),
) -> Result<u64> {
    match host.kind() {
        HostKind::Complete | HostKind::CompleteMinus => {}
        kind => return Err(Error::UnsupportedHost { op: "perfect matching enumeration", kind }),
    }
    let vertices = host.vertex_count();
    if vertices > cap {
        return Err(Error::TooLargeToEnumerate { size: vertices, cap });
    }
    let v = vertices as usize;
    let mut used = vec![false; v];
    let mut acc: Vec<Edge> = Vec::with_capacity(v / 2);
    let mut count = 0u64;
    pair_lowest(host, &mut used, &mut acc, &mut count, &mut visit);
    Ok(count)
}

fn pair_lowest(
    host: &HostGraph,
    used: &mut [bool],
    acc: &mut Vec<Edge>,
    count: &mut u64,
    visit: &mut impl FnMut(&Matching),
) {
    let v = used.len();
    let u = match used.iter().position(|&b| !b) {
        Some(u) => u,
        None => {
            *count += 1;
            // Pairing the lowest free vertex keeps edges sorted.
            let m = Matching::from_sorted_unchecked(acc.clone());
            visit(&m);
            return;
        }
    };
    used[u] = true;
    for w in (u + 1)..v {
        if used[w] {
            continue;
        }
        let e = Edge::new(u as u32, w as u32).expect("distinct endpoints");
        if host.is_forbidden(&e) {
            continue;
        }
        used[w] = true;
        acc.push(e);
        pair_lowest(host, used, acc, count, visit);
        acc.pop();
        used[w] = false;
    }
    used[u] = false;
}

/// Collects every perfect matching of a small host.
pub fn enumerate_perfect_matchings(host: &HostGraph) -> Result<Vec<Matching>> {
    let mut out = Vec::new();
    for_each_perfect_matching(host, |m| out.push(m.clone()))?;
    Ok(out)
}

/// Visits every balanced perfect matching of `K_{r x (r-1)n}` exactly once
/// and returns the count.
pub fn for_each_balanced_pm(r: u32, n: u64, visit: impl FnMut(&Matching)) -> Result<u64> {
    for_each_balanced_pm_capped(r, n, BALANCED_ENUM_CAP, visit)
}

/// [`for_each_balanced_pm`] with an explicit vertex cap.
pub fn for_each_balanced_pm_capped(
    r: u32,
    n: u64,
    cap: u64,
    mut visit: impl FnMut(&Matching),
) -> Result<u64> {
    let host = HostGraph::multipartite(r, n)?;
    let vertices = host.vertex_count();
    if vertices > cap {
        return Err(Error::TooLargeToEnumerate { size: vertices, cap });
    }
    let shape = ProfileShape::multipartite(1, r);
    let mut quota = vec![n; shape.part_pairs().len()];
    let mut used = vec![false; vertices as usize];
    let mut acc: Vec<Edge> = Vec::with_capacity((vertices / 2) as usize);
    let mut count = 0u64;
    pair_lowest_balanced(&host, &shape, &mut quota, &mut used, &mut acc, &mut count, &mut visit);
    Ok(count)
}

#[allow(clippy::too_many_arguments)]
fn pair_lowest_balanced(
    host: &HostGraph,
    shape: &ProfileShape,
    quota: &mut [u64],
    used: &mut [bool],
    acc: &mut Vec<Edge>,
    count: &mut u64,
    visit: &mut impl FnMut(&Matching),
) {
    let v = used.len();
    let u = match used.iter().position(|&b| !b) {
        Some(u) => u,
        None => {
            *count += 1;
            let m = Matching::from_sorted_unchecked(acc.clone());
            debug_assert!(m.is_balanced(host));
            visit(&m);
            return;
        }
    };
    used[u] = true;
    let pu = host.part_of(u as u32);
    for w in (u + 1)..v {
        if used[w] {
            continue;
        }
        let pw = host.part_of(w as u32);
        if pu == pw {
            continue;
        }
        let slot = shape.pair_slot(pu, pw).expect("parts differ");
        if quota[slot] == 0 {
            continue;
        }
        quota[slot] -= 1;
        used[w] = true;
        acc.push(Edge::new(u as u32, w as u32).expect("distinct endpoints"));
        pair_lowest_balanced(host, shape, quota, used, acc, count, visit);
        acc.pop();
        used[w] = false;
        quota[slot] += 1;
    }
    used[u] = false;
}

/// Collects every balanced perfect matching of a small multipartite host.
pub fn enumerate_balanced_pms(r: u32, n: u64) -> Result<Vec<Matching>> {
    let mut out = Vec::new();
    for_each_balanced_pm(r, n, |m| out.push(m.clone()))?;
    Ok(out)
}

/// Exact joint PMF of the intersection counts under the host's uniform
/// measure, by full enumeration. The independent oracle for the generating
/// function route.
pub fn brute_force_pmf(host: &HostGraph, family: &SubgraphFamily) -> Result<ExactPmf> {
    let mut counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    let mut tally = |m: &Matching| {
        let k = intersect_profile(m, family, host).psi1();
        *counts.entry(k).or_insert(0) += 1;
    };
    let total = match host.kind() {
        HostKind::Complete | HostKind::CompleteMinus => {
            for_each_perfect_matching(host, &mut tally)?
        }
        HostKind::Multipartite => for_each_balanced_pm(host.r(), host.n(), &mut tally)?,
    };
    Ok(ExactPmf::from_counts(family.ell(), counts, total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::numbers::{bpm_count, pma_count};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn e(u: u32, v: u32) -> Edge {
        Edge::new(u, v).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn k4_has_three_matchings() {
        let host = HostGraph::complete(2).unwrap();
        let pms = enumerate_perfect_matchings(&host).unwrap();
        assert_eq!(pms.len(), 3);
        for m in &pms {
            assert!(m.is_perfect(&host));
        }
    }

    #[test]
    fn k2_has_one_matching() {
        let host = HostGraph::complete(1).unwrap();
        let pms = enumerate_perfect_matchings(&host).unwrap();
        assert_eq!(pms.len(), 1);
        assert_eq!(pms[0].edges(), &[e(0, 1)]);
    }

    #[test]
    fn forbidden_edge_filters_matchings() {
        let host = HostGraph::complete_minus(2, vec![e(0, 1)]).unwrap();
        let pms = enumerate_perfect_matchings(&host).unwrap();
        assert_eq!(pms.len(), 2);
        for m in &pms {
            assert!(!m.contains(&e(0, 1)));
        }
    }

    #[test]
    fn counts_match_closed_forms() {
        for n in 1..=6u64 {
            let host = HostGraph::complete(n).unwrap();
            let count = for_each_perfect_matching(&host, |_| {}).unwrap();
            assert_eq!(BigInt::from(count), pma_count(n));
        }
        for (r, n) in [(2u32, 1u64), (2, 2), (2, 3), (3, 1), (3, 2), (4, 1)] {
            let count = for_each_balanced_pm(r, n, |_| {}).unwrap();
            assert_eq!(BigInt::from(count), bpm_count(r, n));
        }
    }

    #[test]
    fn balanced_enumeration_is_balanced() {
        let host = HostGraph::multipartite(3, 1).unwrap();
        let pms = enumerate_balanced_pms(3, 1).unwrap();
        assert_eq!(pms.len(), 8);
        for m in &pms {
            assert!(m.is_balanced(&host));
        }
        // K_{2,2} has 2 matchings, both balanced.
        assert_eq!(enumerate_balanced_pms(2, 2).unwrap().len(), 2);
        assert_eq!(enumerate_balanced_pms(2, 1).unwrap().len(), 1);
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let host = HostGraph::complete(9).unwrap();
        assert!(matches!(
            for_each_perfect_matching(&host, |_| {}),
            Err(Error::TooLargeToEnumerate { size: 18, cap: 16 })
        ));
        assert!(matches!(
            for_each_balanced_pm(3, 3, |_| {}),
            Err(Error::TooLargeToEnumerate { size: 18, cap: 12 })
        ));
    }

    #[test]
    fn brute_force_pmf_on_k4() {
        let host = HostGraph::complete(2).unwrap();
        let fam = SubgraphFamily::validate(&host, vec![vec![e(0, 1)]], false).unwrap();
        let pmf = brute_force_pmf(&host, &fam).unwrap();
        assert_eq!(pmf.mass(&[0]), rat(2, 3));
        assert_eq!(pmf.mass(&[1]), rat(1, 3));
    }

    #[test]
    fn brute_force_pmf_on_balanced_k3x2() {
        let host = HostGraph::multipartite(3, 1).unwrap();
        let fam = SubgraphFamily::validate(&host, vec![vec![e(0, 2)]], false).unwrap();
        let pmf = brute_force_pmf(&host, &fam).unwrap();
        assert_eq!(pmf.mass(&[1]), rat(1, 4));
        assert_eq!(pmf.mass(&[0]), rat(3, 4));
    }

    #[test]
    fn empty_member_gives_point_mass() {
        let host = HostGraph::complete(2).unwrap();
        let fam = SubgraphFamily::validate(&host, vec![vec![]], false).unwrap();
        let pmf = brute_force_pmf(&host, &fam).unwrap();
        assert_eq!(pmf.mass(&[0]), rat(1, 1));
    }
}
