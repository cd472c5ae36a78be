//! Cross-checks of the generating-function engine against independent
//! oracles: naive pairing enumeration, direct subset counting, and the
//! brute-force PMF.

use num_bigint::BigInt;
use num_rational::BigRational;

use matchdist::exact::{
    brute_force_pmf, build_pgf, conditional_pmf_avoiding, count_x_matchings,
    enumerate_balanced_pms, exact_pmf, pma_count, pmf_from_pgf,
};
use matchdist::graphs::{intersect_profile, Edge, HostGraph, Matching, SubgraphFamily};

fn e(u: u32, v: u32) -> Edge {
    Edge::new(u, v).unwrap()
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Test-only oracle: all pairings of `0..v` by direct recursion, independent
/// of the library's enumerator.
fn naive_pairings(v: u32) -> Vec<Vec<(u32, u32)>> {
    fn rec(pool: Vec<u32>, acc: &mut Vec<(u32, u32)>, out: &mut Vec<Vec<(u32, u32)>>) {
        if pool.is_empty() {
            out.push(acc.clone());
            return;
        }
        let u = pool[0];
        for i in 1..pool.len() {
            let w = pool[i];
            let rest: Vec<u32> = pool[1..].iter().copied().filter(|&x| x != w).collect();
            acc.push((u, w));
            rec(rest, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec((0..v).collect(), &mut Vec::new(), &mut out);
    out
}

#[test]
fn enumerator_agrees_with_naive_pairings() {
    for n in 1..=4u64 {
        let host = HostGraph::complete(n).unwrap();
        let lib: Vec<_> = matchdist::exact::enumerate_perfect_matchings(&host).unwrap();
        let naive = naive_pairings(2 * n as u32);
        assert_eq!(lib.len(), naive.len());
        assert_eq!(BigInt::from(lib.len()), pma_count(n));
        for pairing in naive {
            let m = Matching::new(
                pairing.iter().map(|&(u, v)| e(u, v)).collect(),
            )
            .unwrap();
            assert!(lib.contains(&m));
        }
    }
}

#[test]
fn x_matching_counts_agree_with_subset_filtering() {
    // Oracle: filter all edge subsets of the union for matchings with the
    // requested per-member counts.
    let host = HostGraph::complete(4).unwrap();
    let members = vec![vec![e(0, 1), e(1, 2), e(2, 3)], vec![e(4, 5), e(6, 7)]];
    let family = SubgraphFamily::validate(&host, members.clone(), true).unwrap();
    let union: Vec<(usize, Edge)> = members
        .iter()
        .enumerate()
        .flat_map(|(m, es)| es.iter().map(move |&edge| (m, edge)))
        .collect();
    for x0 in 0..=3u32 {
        for x1 in 0..=2u32 {
            let mut oracle = 0u64;
            for mask in 0u32..(1 << union.len()) {
                let chosen: Vec<&(usize, Edge)> = union
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| mask & (1 << i) != 0)
                    .map(|(_, t)| t)
                    .collect();
                let is_matching = chosen.iter().enumerate().all(|(a, (_, ea))| {
                    chosen[a + 1..].iter().all(|(_, eb)| !ea.shares_vertex(eb))
                });
                if !is_matching {
                    continue;
                }
                let counts = [
                    chosen.iter().filter(|(m, _)| *m == 0).count() as u32,
                    chosen.iter().filter(|(m, _)| *m == 1).count() as u32,
                ];
                if counts == [x0, x1] {
                    oracle += 1;
                }
            }
            let mu = count_x_matchings(&family, &[x0, x1], &host).unwrap();
            assert_eq!(mu, BigInt::from(oracle), "x = ({x0}, {x1})");
        }
    }
}

#[test]
fn pgf_route_matches_brute_force_on_complete_hosts() {
    let cases: Vec<(u64, Vec<Vec<Edge>>)> = vec![
        (2, vec![vec![e(0, 1)]]),
        (3, vec![vec![e(0, 1), e(2, 3)]]),
        (3, vec![vec![e(0, 1)], vec![e(2, 3)], vec![e(4, 5)]]),
        (4, vec![vec![e(0, 1), e(1, 2), e(2, 3)]]),
        (4, vec![vec![e(0, 1), e(2, 3)], vec![e(4, 5), e(6, 7)]]),
        (5, vec![vec![e(0, 1), e(2, 3), e(4, 5)], vec![e(6, 7), e(8, 9)]]),
    ];
    for (n, members) in cases {
        let host = HostGraph::complete(n).unwrap();
        let family = SubgraphFamily::validate(&host, members, true).unwrap();
        let via_pgf = pmf_from_pgf(&build_pgf(&host, &family).unwrap()).unwrap();
        let brute = brute_force_pmf(&host, &family).unwrap();
        assert_eq!(via_pgf, brute, "n = {n}");
    }
}

#[test]
fn pgf_route_matches_brute_force_on_multipartite_hosts() {
    let cases: Vec<(u32, u64, Vec<Vec<Edge>>)> = vec![
        (3, 1, vec![vec![e(0, 2)]]),
        (3, 1, vec![vec![e(0, 2), e(1, 4)], vec![e(3, 5)]]),
        (2, 3, vec![vec![e(0, 3), e(1, 4), e(2, 5)]]),
        (2, 4, vec![vec![e(0, 4), e(1, 5)], vec![e(2, 6), e(3, 7)]]),
        (3, 2, vec![vec![e(0, 4), e(1, 5), e(8, 2)]]),
        (4, 1, vec![vec![e(0, 3), e(6, 9)]]),
    ];
    for (r, n, members) in cases {
        let host = HostGraph::multipartite(r, n).unwrap();
        let family = SubgraphFamily::validate(&host, members, true).unwrap();
        let via_pgf = pmf_from_pgf(&build_pgf(&host, &family).unwrap()).unwrap();
        let brute = brute_force_pmf(&host, &family).unwrap();
        assert_eq!(via_pgf, brute, "r = {r}, n = {n}");
    }
}

#[test]
fn conditional_route_matches_brute_force_on_minus_hosts() {
    let cases: Vec<(u64, Vec<Edge>, Vec<Vec<Edge>>)> = vec![
        (2, vec![e(0, 1)], vec![vec![e(2, 3)]]),
        (3, vec![e(0, 1)], vec![vec![e(2, 3), e(4, 5)]]),
        (4, vec![e(0, 1), e(2, 3)], vec![vec![e(4, 5)], vec![e(6, 7)]]),
        (4, vec![e(0, 1), e(1, 2), e(2, 3)], vec![vec![e(4, 5), e(5, 6)]]),
    ];
    for (n, forbidden, members) in cases {
        let host = HostGraph::complete_minus(n, forbidden.clone()).unwrap();
        let family = SubgraphFamily::validate(&host, members.clone(), true).unwrap();
        let conditional = conditional_pmf_avoiding(n, &forbidden, &members).unwrap();
        let brute = brute_force_pmf(&host, &family).unwrap();
        assert_eq!(conditional, brute, "n = {n}");
    }
}

#[test]
fn balanced_profile_example_on_k3x2() {
    // Matching {(0,2), (1,4), (3,5)} against family {(0,2), (3,5)}:
    // one hit between parts 0,1 and one between parts 1,2.
    let host = HostGraph::multipartite(3, 1).unwrap();
    let family = SubgraphFamily::validate(&host, vec![vec![e(0, 2), e(3, 5)]], true).unwrap();
    let m = Matching::new(vec![e(0, 2), e(1, 4), e(3, 5)]).unwrap();
    assert!(m.is_balanced(&host));
    let p = intersect_profile(&m, &family, &host);
    assert_eq!(p.counts(), &[1, 0, 1]);
    assert_eq!(p.psi1(), vec![2]);
}

#[test]
fn fixed_edge_probability_matches_enumeration_on_k3x2() {
    // 2 of the 8 balanced matchings contain any fixed edge.
    let all = enumerate_balanced_pms(3, 1).unwrap();
    let hits = all.iter().filter(|m| m.contains(&e(0, 2))).count();
    assert_eq!(hits, 2);
    let host = HostGraph::multipartite(3, 1).unwrap();
    let family = SubgraphFamily::validate(&host, vec![vec![e(0, 2)]], true).unwrap();
    let pmf = exact_pmf(&host, &family).unwrap();
    assert_eq!(pmf.mass(&[1]), rat(1, 4));
}

#[test]
fn overlapping_families_match_brute_force_everywhere() {
    let host = HostGraph::complete(4).unwrap();
    let members = vec![
        vec![e(0, 1), e(2, 3), e(4, 5)],
        vec![e(2, 3), e(6, 7)],
        vec![e(4, 5), e(2, 3)],
    ];
    let family = SubgraphFamily::validate(&host, members, false).unwrap();
    assert!(!family.is_pairwise_disjoint());
    let exact = exact_pmf(&host, &family).unwrap();
    let brute = brute_force_pmf(&host, &family).unwrap();
    assert_eq!(exact, brute);
}

#[test]
fn five_overlapping_members_round_through_31_pieces() {
    let host = HostGraph::complete(5).unwrap();
    let shared = e(0, 1);
    let members: Vec<Vec<Edge>> = (0..5u32)
        .map(|m| {
            let mut edges = vec![shared, e(2 * m, 2 * m + 1)];
            edges.sort_unstable();
            edges.dedup();
            edges
        })
        .collect();
    let family = SubgraphFamily::validate(&host, members, false).unwrap();
    let exact = exact_pmf(&host, &family).unwrap();
    let brute = brute_force_pmf(&host, &family).unwrap();
    assert_eq!(exact, brute);
}

#[test]
fn overlapping_families_on_minus_hosts() {
    let forbidden = vec![e(0, 1)];
    let host = HostGraph::complete_minus(4, forbidden).unwrap();
    let members = vec![vec![e(2, 3), e(4, 5)], vec![e(4, 5), e(6, 7)]];
    let family = SubgraphFamily::validate(&host, members, false).unwrap();
    let exact = exact_pmf(&host, &family).unwrap();
    let brute = brute_force_pmf(&host, &family).unwrap();
    assert_eq!(exact, brute);
}
